"""Unit tests for the gatekeeper policy engine and the property suite."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import pytest

from renyilab.contracts.models import CheckResult
from renyilab.contracts.types import SuiteVerdict
from renyilab.errors import InvalidPolicy
from renyilab.gatekeeper.policy import Gatekeeper, ToleranceConfig
from renyilab.observability.metrics import CHECK_FAILURES
from renyilab.orchestrator.suite import SUITE_CHECKS, run_property_suite
from renyilab.settings import DEFAULT_TOLERANCES


def _check(name: str, *, gated: bool, passed: bool) -> CheckResult:
    return CheckResult(
        name=name,
        gated=gated,
        passed=passed,
        observed=0.0 if passed else 1e-3,
        tolerance=1e-9,
        detail="synthetic",
    )


def _policy(decision_policy: str = "warnings") -> ToleranceConfig:
    return ToleranceConfig.from_mapping(
        {
            "decision_policy": decision_policy,
            "checks": {
                "duality": {"tolerance": 1e-8, "gated": True, "trials": 2},
                "conjecture1": {"tolerance": 1e-8, "gated": False, "trials": 2},
            },
        }
    )


def test_default_tolerances_cover_every_suite_check() -> None:
    policy = ToleranceConfig.load(DEFAULT_TOLERANCES)
    assert set(policy.checks) == set(SUITE_CHECKS)
    assert policy.checks["duality"].gated
    assert not policy.checks["conjecture2"].gated
    assert policy.decision_policy == "warnings"


def test_gatekeeper_fails_on_gated_failure() -> None:
    decision = Gatekeeper(_policy()).decide(
        [
            _check("duality", gated=True, passed=False),
            _check("conjecture1", gated=False, passed=True),
        ]
    )
    assert decision.verdict == SuiteVerdict.FAIL
    assert not decision.gated_passed
    assert decision.reasons[0].startswith("duality: observed")


def test_gatekeeper_warns_on_conjectural_failure() -> None:
    decision = Gatekeeper(_policy()).decide(
        [
            _check("duality", gated=True, passed=True),
            _check("conjecture1", gated=False, passed=False),
        ]
    )
    assert decision.verdict == SuiteVerdict.PASS_WITH_WARNINGS
    assert decision.reasons == ["All gated checks satisfied"]
    assert len(decision.warnings) == 1


def test_gatekeeper_strict_policy_turns_warnings_into_failure() -> None:
    decision = Gatekeeper(_policy("strict")).decide(
        [
            _check("duality", gated=True, passed=True),
            _check("conjecture1", gated=False, passed=False),
        ]
    )
    assert decision.verdict == SuiteVerdict.FAIL
    assert decision.gated_passed


def test_gatekeeper_fails_on_missing_gated_check() -> None:
    decision = Gatekeeper(_policy()).decide([_check("conjecture1", gated=False, passed=True)])
    assert decision.verdict == SuiteVerdict.FAIL
    assert "Missing gated checks: ['duality']" in decision.reasons


def test_gatekeeper_passes_clean_run() -> None:
    decision = Gatekeeper(_policy()).decide(
        [
            _check("duality", gated=True, passed=True),
            _check("conjecture1", gated=False, passed=True),
        ]
    )
    assert decision.verdict == SuiteVerdict.PASS
    assert decision.metadata == {"checks": 2, "decision_policy": "warnings"}


def test_scaled_policy_multiplies_tolerances() -> None:
    scaled = _policy().scaled(10.0)
    assert scaled.checks["duality"].tolerance == 1e-7
    assert scaled.checks["duality"].trials == 2


def test_suite_subset_passes() -> None:
    only = ["hermitian_calculus", "variance_nonnegative", "duality"]
    report = run_property_suite(0, scale=0.1, only=only)
    names = [c.name for c in report.checks]
    assert names == ["hermitian_calculus", "duality", "variance_nonnegative"]
    assert all(c.passed for c in report.checks)
    assert report.decision.verdict == SuiteVerdict.PASS


def test_channel_and_divergence_checks_pass() -> None:
    names = [
        "renyi_data_processing",
        "renyi_alpha_monotonicity",
        "choi_cptp",
        "petz_fixed_point",
        "measurement_dilation",
        "fuchs_van_de_graaf",
    ]
    report = run_property_suite(2, scale=0.05, only=names)
    assert [c.name for c in report.checks] == names
    assert all(c.gated and c.passed for c in report.checks), [c.detail for c in report.checks]
    assert report.decision.verdict == SuiteVerdict.PASS


def test_squashed_property_checks_pass() -> None:
    names = ["squashed_separable_vanishing", "squashed_convexity", "squashed_subadditivity"]
    report = run_property_suite(0, scale=0.05, only=names)
    assert [c.name for c in report.checks] == names
    assert all(c.passed for c in report.checks)
    assert report.decision.verdict == SuiteVerdict.PASS


def test_default_trial_counts() -> None:
    checks = ToleranceConfig.load(DEFAULT_TOLERANCES).checks
    assert checks["duality"].trials == 500
    assert checks["sibson_consistency"].trials == 50
    assert checks["delta_cmi_consistency"].trials == 100
    assert checks["renyi_data_processing"].trials == 200
    assert checks["fuchs_van_de_graaf"].trials == 500
    gated = ("choi_cptp", "petz_fixed_point", "squashed_convexity")
    assert all(checks[name].gated for name in gated)


def test_suite_fails_when_tolerance_cannot_be_met() -> None:
    policy = ToleranceConfig.from_mapping(
        {"checks": {"hermitian_calculus": {"tolerance": -1.0, "gated": True, "trials": 1}}}
    )
    report = run_property_suite(0, policy=policy)
    assert report.decision.verdict == SuiteVerdict.FAIL
    assert not report.checks[0].passed


def test_suite_body_is_reproducible() -> None:
    first = run_property_suite(3, scale=0.1, only=["hermitian_calculus", "cmi_identities"])
    second = run_property_suite(3, scale=0.1, only=["hermitian_calculus", "cmi_identities"])
    assert first.body_json() == second.body_json()


def test_unknown_checks_are_skipped() -> None:
    policy = ToleranceConfig.from_mapping(
        {"checks": {"no_such_check": {"tolerance": 1.0, "gated": False}}}
    )
    report = run_property_suite(0, policy=policy)
    assert report.checks == []
    assert report.decision.verdict == SuiteVerdict.PASS


def test_failed_checks_are_counted() -> None:
    policy = ToleranceConfig.from_mapping(
        {"checks": {"hermitian_calculus": {"tolerance": -1.0, "gated": False, "trials": 1}}}
    )
    cell = CHECK_FAILURES.labels(check="hermitian_calculus", gated="false")
    before = cell.value
    report = run_property_suite(1, policy=policy)
    assert report.decision.verdict == SuiteVerdict.PASS_WITH_WARNINGS
    assert cell.value == before + 1


@pytest.mark.parametrize(
    "data",
    [
        {"checks": {"duality": {"gated": True}}},
        {"checks": [1, 2]},
        {"decision_policy": "lenient", "checks": {}},
    ],
)
def test_malformed_policy_is_rejected(data: dict[str, Any]) -> None:
    with pytest.raises(InvalidPolicy):
        ToleranceConfig.from_mapping(data)


def test_invalid_yaml_is_rejected(tmp_path: Path) -> None:
    path = tmp_path / "tolerances.yaml"
    path.write_text("checks: [unclosed\n", encoding="utf-8")
    with pytest.raises(InvalidPolicy):
        ToleranceConfig.load(path)
