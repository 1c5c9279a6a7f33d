"""Tests for logging, metrics, tracing toggles, settings and the work queue."""

from __future__ import annotations

import json
import logging
import math
import threading

import numpy as np
import pytest

from renyilab.contracts.types import SuiteVerdict
from renyilab.observability.logging import JsonFormatter
from renyilab.observability.metrics import TRIALS, Counter, render_metrics
from renyilab.observability.telemetry import (
    DISABLE_ENV,
    set_attributes,
    setup_tracing,
    span_attribute,
    traced,
    tracing_disabled,
)
from renyilab.orchestrator.pool import WorkQueue
from renyilab.settings import get_settings


def test_json_formatter_merges_extra_fields() -> None:
    record = logging.LogRecord(
        "renyilab.test", logging.WARNING, __file__, 1, "campaign.violation", None, None
    )
    record.extra = {"campaign": "c1", "margin": -0.5}
    payload = json.loads(JsonFormatter().format(record))
    assert payload["message"] == "campaign.violation"
    assert payload["level"] == "WARNING"
    assert payload["campaign"] == "c1"
    assert payload["margin"] == -0.5


def test_json_formatter_writes_strict_json_for_infinite_margins() -> None:
    record = logging.LogRecord(
        "renyilab.test", logging.INFO, __file__, 1, "campaign.finished", None, None
    )
    record.extra = {"min_margin": math.inf, "values": [np.float64(0.5), -math.inf], "nan": math.nan}
    payload = json.loads(JsonFormatter().format(record))
    assert payload["min_margin"] == "inf"
    assert payload["values"] == [0.5, "-inf"]
    assert payload["nan"] == "nan"


def test_metrics_render_labelled_counters() -> None:
    TRIALS.labels(campaign="observability-test").inc(3)
    text = render_metrics()
    assert "# TYPE renyilab_trials_total counter" in text
    assert 'renyilab_trials_total{campaign="observability-test"}' in text


def test_counter_labels_share_state() -> None:
    counter = Counter(name="x_total", description="x", label_names=("kind",))
    counter.labels(kind="a").inc()
    counter.labels(kind="a").inc(2)
    assert counter.labels(kind="a").value == 3.0


def test_metric_labels_are_validated_and_escaped() -> None:
    counter = Counter(name="y_total", description="y", label_names=("check",))
    with pytest.raises(KeyError):
        counter.labels(campaign="c1")
    counter.labels(check='say "hi"').inc()
    assert counter.render()[-1] == 'y_total{check="say \\"hi\\""} 1.0'


def test_tracing_toggle(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(DISABLE_ENV, "1")
    assert tracing_disabled()
    assert setup_tracing("renyi-lab-test") is False
    with traced("campaign.noop", trials=2, margin=math.inf) as span:
        set_attributes(span, {"verdict": SuiteVerdict.PASS})
    monkeypatch.delenv(DISABLE_ENV)
    assert not tracing_disabled()


def test_span_attributes_are_coerced() -> None:
    assert span_attribute(SuiteVerdict.FAIL) == "FAIL"
    assert span_attribute(-math.inf) == "-inf"
    assert span_attribute(0.25) == 0.25
    assert span_attribute(True) is True
    assert span_attribute((2, 3)) == "(2, 3)"


def test_settings_read_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("RENYILAB_REJECT_EPS", "1e-4")
    monkeypatch.setenv("RENYILAB_WORKERS", "0")
    get_settings.cache_clear()
    try:
        settings = get_settings()
        assert settings.reject_eps == 1e-4
        assert settings.workers == 1
        assert settings.tolerances_path.name == "tolerances.yaml"
    finally:
        get_settings.cache_clear()


@pytest.mark.parametrize("workers", [1, 3])
def test_work_queue_returns_results_in_index_order(workers: int) -> None:
    names: set[str] = set()

    def task(index: int) -> int:
        names.add(threading.current_thread().name)
        return index * index

    assert WorkQueue(workers=workers, name="squares").map(task, 10) == [i * i for i in range(10)]
    if workers > 1:
        assert all(name.startswith("squares-worker-") for name in names)


def test_work_queue_propagates_first_failure() -> None:
    def task(index: int) -> int:
        if index == 4:
            raise ValueError("boom")
        return index

    with pytest.raises(ValueError, match="boom"):
        WorkQueue(workers=2).map(task, 8)
    with pytest.raises(ValueError, match="boom"):
        WorkQueue(workers=1).map(task, 8)
