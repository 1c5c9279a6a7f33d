"""Prometheus text-format counters for campaigns, optimizers and the property suite.

The CLI is a batch process, so metrics are rendered once at exit to ``--metrics-out``
rather than scraped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from threading import Lock
import time
from types import TracebackType


@dataclass
class _CounterCell:
    value: float = 0.0
    _lock: Lock = field(default_factory=Lock, repr=False)

    def inc(self, amount: float = 1.0) -> None:
        with self._lock:
            self.value += amount


@dataclass
class _SummaryCell:
    count: int = 0
    total: float = 0.0
    _lock: Lock = field(default_factory=Lock, repr=False)

    def observe(self, value: float) -> None:
        with self._lock:
            self.count += 1
            self.total += value

    def time(self) -> _Timer:
        return _Timer(self)


@dataclass
class _Metric:
    name: str
    description: str
    label_names: tuple[str, ...]
    _lock: Lock = field(default_factory=Lock, repr=False)

    def _key(self, labels: dict[str, str]) -> tuple[str, ...]:
        if set(labels) != set(self.label_names):
            raise KeyError(f"{self.name} takes labels {self.label_names}, got {tuple(labels)}")
        return tuple(str(labels[name]) for name in self.label_names)

    def _label_str(self, values: tuple[str, ...]) -> str:
        escaped = (v.replace("\\", "\\\\").replace('"', '\\"') for v in values)
        pairs = zip(self.label_names, escaped, strict=True)
        return ",".join(f'{name}="{value}"' for name, value in pairs)


@dataclass
class Counter(_Metric):
    values: dict[tuple[str, ...], _CounterCell] = field(default_factory=dict)

    def labels(self, **labels: str) -> _CounterCell:
        key = self._key(labels)
        with self._lock:
            return self.values.setdefault(key, _CounterCell())

    def render(self) -> list[str]:
        lines = [f"# HELP {self.name} {self.description}", f"# TYPE {self.name} counter"]
        for key, cell in sorted(self.values.items()):
            lines.append(f"{self.name}{{{self._label_str(key)}}} {cell.value}")
        return lines


@dataclass
class Summary(_Metric):
    values: dict[tuple[str, ...], _SummaryCell] = field(default_factory=dict)

    def labels(self, **labels: str) -> _SummaryCell:
        key = self._key(labels)
        with self._lock:
            return self.values.setdefault(key, _SummaryCell())

    def render(self) -> list[str]:
        lines = [f"# HELP {self.name} {self.description}", f"# TYPE {self.name} summary"]
        for key, cell in sorted(self.values.items()):
            labels = self._label_str(key)
            lines.append(f"{self.name}_count{{{labels}}} {cell.count}")
            lines.append(f"{self.name}_sum{{{labels}}} {cell.total}")
        return lines


TRIALS = Counter("renyilab_trials_total", "Campaign trials evaluated", ("campaign",))
VIOLATIONS = Counter(
    "renyilab_violations_total", "Records with margin below the violation threshold", ("campaign",)
)
OBJECTIVE_EVALUATIONS = Counter(
    "renyilab_objective_evaluations_total",
    "Objective evaluations spent by measure optimizers",
    ("measure",),
)
CHECK_FAILURES = Counter(
    "renyilab_check_failures_total", "Suite checks that missed their tolerance", ("check", "gated")
)
TRIAL_DURATION = Summary(
    "renyilab_trial_duration_seconds", "Wall time per campaign trial", ("campaign",)
)

REGISTRY: tuple[Counter | Summary, ...] = (
    TRIALS,
    VIOLATIONS,
    OBJECTIVE_EVALUATIONS,
    CHECK_FAILURES,
    TRIAL_DURATION,
)


def render_metrics() -> str:
    lines = [line for metric in REGISTRY for line in metric.render()]
    return "\n".join(lines) + "\n"


def write_metrics(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_metrics(), encoding="utf-8")


class _Timer:
    def __init__(self, cell: _SummaryCell) -> None:
        self._cell = cell
        self._start = 0.0

    def __enter__(self) -> _Timer:
        self._start = time.perf_counter()
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self._cell.observe(time.perf_counter() - self._start)
