"""Tolerance policy and verdict engine for the property suite."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml  # type: ignore[import-untyped]

from renyilab.contracts.models import CheckResult, SuiteDecision
from renyilab.contracts.types import SuiteVerdict
from renyilab.errors import InvalidPolicy

DECISION_POLICIES = ("strict", "warnings")


@dataclass(slots=True)
class CheckPolicy:
    tolerance: float
    gated: bool
    trials: int


@dataclass(slots=True)
class ToleranceConfig:
    """Loaded tolerance configuration."""

    checks: dict[str, CheckPolicy]
    decision_policy: str

    @classmethod
    def load(cls, path: Path) -> ToleranceConfig:
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise InvalidPolicy(f"cannot read tolerance file {path}") from exc
        except yaml.YAMLError as exc:
            raise InvalidPolicy(f"{path} is not valid YAML") from exc
        return cls.from_mapping(data)

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> ToleranceConfig:
        try:
            checks = {
                name: CheckPolicy(
                    tolerance=float(entry["tolerance"]),
                    gated=bool(entry.get("gated", True)),
                    trials=int(entry.get("trials", 1)),
                )
                for name, entry in data["checks"].items()
            }
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidPolicy(f"malformed tolerance policy: {exc!r}") from exc
        decision_policy = data.get("decision_policy", "warnings")
        if decision_policy not in DECISION_POLICIES:
            raise InvalidPolicy(
                f"decision_policy must be one of {DECISION_POLICIES}, got {decision_policy!r}"
            )
        return cls(checks=checks, decision_policy=decision_policy)

    def scaled(self, factor: float) -> ToleranceConfig:
        """Same policy with every tolerance multiplied by ``factor``."""
        return ToleranceConfig(
            checks={
                name: CheckPolicy(tolerance=p.tolerance * factor, gated=p.gated, trials=p.trials)
                for name, p in self.checks.items()
            },
            decision_policy=self.decision_policy,
        )


class Gatekeeper:
    """Policy-driven verdict over property-suite checks."""

    def __init__(self, policy: ToleranceConfig) -> None:
        self._policy = policy

    def decide(self, checks: list[CheckResult]) -> SuiteDecision:
        reasons: list[str] = []
        warnings: list[str] = []
        seen = {check.name for check in checks}
        required = {name for name, p in self._policy.checks.items() if p.gated}

        gated_passed = required.issubset(seen)
        if not gated_passed:
            reasons.append(f"Missing gated checks: {sorted(required - seen)}")

        for check in checks:
            if check.passed:
                continue
            message = (
                f"{check.name}: observed {check.observed:.3e} "
                f"exceeds tolerance {check.tolerance:.3e}"
            )
            if check.detail:
                message = f"{message} ({check.detail})"
            if check.gated:
                gated_passed = False
                reasons.append(message)
            else:
                warnings.append(message)

        if not gated_passed:
            verdict = SuiteVerdict.FAIL
        elif warnings and self._policy.decision_policy == "strict":
            verdict = SuiteVerdict.FAIL
            reasons.append("Conjectural checks raised warnings under the strict policy")
        elif warnings:
            verdict = SuiteVerdict.PASS_WITH_WARNINGS
        else:
            verdict = SuiteVerdict.PASS

        if not reasons:
            reasons.append("All gated checks satisfied")

        return SuiteDecision(
            verdict=verdict,
            reasons=reasons,
            gated_passed=gated_passed,
            warnings=warnings,
            metadata={"checks": len(checks), "decision_policy": self._policy.decision_policy},
        )
