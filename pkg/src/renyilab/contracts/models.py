"""Report and configuration contracts."""

from __future__ import annotations

from datetime import datetime
import json
import math
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, computed_field

from renyilab.contracts.types import (
    Branch,
    MeasureKind,
    OptimizerMethod,
    Regime,
    SuiteVerdict,
)


def canonical_json(payload: Any) -> str:
    """Sorted-key, indented JSON; identical inputs give identical bytes."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=True)


class OptimizerConfig(BaseModel):
    """Budget and method for the isometry optimizers."""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(default=16, ge=1)
    max_iters: int = Field(default=20000, ge=1)
    tol: float = Field(default=1e-7, gt=0)
    method: OptimizerMethod = OptimizerMethod.NELDER_MEAD
    seed: int = 0
    workers: int = Field(default=1, ge=1)
    strict: bool = False


class EntropicValue(BaseModel):
    """One value printed by ``renyi-lab eval``, in nats, tagged with its order regime."""

    value: float
    alpha: float
    regime: Regime
    branch: Branch

    @computed_field  # type: ignore[prop-decorator]
    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)


class MeasureResult(BaseModel):
    """Outcome of a measure optimization; values are upper bounds on the infimum."""

    measure: MeasureKind
    alpha: float
    value: float
    converged: bool
    evaluations: int
    is_upper_bound: bool = True
    feasibility_residual: float = 0.0
    method: OptimizerMethod = OptimizerMethod.NELDER_MEAD
    seed: int = 0
    restart_index: int = 0
    argmin: dict[str, Any] = Field(default_factory=dict)


class TrialRecord(BaseModel):
    """One campaign trial; ``seed`` and ``trial`` regenerate the sampled instance."""

    campaign: str
    trial: int
    seed: int
    params: dict[str, Any] = Field(default_factory=dict)
    values: dict[str, float] = Field(default_factory=dict)
    margin: float
    violation: bool = False
    near_violation: bool = False


class CampaignSpec(BaseModel):
    name: str
    seed: int
    trials: int = Field(ge=1)
    dims: list[int] = Field(default_factory=list)
    alpha_grid: list[float] = Field(default_factory=list)
    beta_grid: list[float] = Field(default_factory=list)
    options: dict[str, Any] = Field(default_factory=dict)
    violation_threshold: float = -1e-8


class CampaignAggregate(BaseModel):
    trials: int
    min_margin: float
    mean_margin: float
    violations: int
    near_violations: int


class ReportMetadata(BaseModel):
    """Run-specific fields kept out of the report body."""

    started_at: datetime
    wall_time_s: float
    version: str
    workers: int


class CampaignReport(BaseModel):
    spec: CampaignSpec
    rows: list[TrialRecord]
    aggregate: CampaignAggregate
    controls: dict[str, CampaignAggregate] = Field(default_factory=dict)
    metadata: ReportMetadata | None = None

    def body(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude={"metadata"})

    def body_json(self) -> str:
        return canonical_json(self.body())


class CheckResult(BaseModel):
    """Result of one property check in the suite."""

    name: str
    gated: bool
    passed: bool
    observed: float
    tolerance: float
    detail: str = ""


class SuiteDecision(BaseModel):
    verdict: SuiteVerdict
    reasons: list[str]
    gated_passed: bool
    warnings: list[str] = Field(default_factory=list)
    metadata: dict[str, Any] = Field(default_factory=dict)


class SuiteReport(BaseModel):
    seed: int
    checks: list[CheckResult]
    decision: SuiteDecision
    metadata: ReportMetadata | None = None

    def body_json(self) -> str:
        return canonical_json(self.model_dump(mode="json", exclude={"metadata"}))


class LieTrotterRow(BaseModel):
    p: float
    distance: float


class SlopeCheck(BaseModel):
    """Finite-difference slope of the Rényi difference at alpha = 1 against V/2."""

    slope: float
    half_variance: float
    relative_error: float
    skipped: bool = False


class JointConvexityOutcome(BaseModel):
    margin: float
    flagged_margin: float

    @property
    def equivalence_gap(self) -> float:
        return abs(self.margin - self.flagged_margin)


class HolevoOutcome(BaseModel):
    holevo_gap: float
    margin: float
    mutual_info_xb: float
    mutual_info_xy: float


class CcInvarianceReport(BaseModel):
    """Squashed objectives for the three flag groupings and their pairwise gaps."""

    alpha: float
    values: dict[str, float]

    @property
    def gaps(self) -> dict[str, float]:
        keys = sorted(self.values)
        return {
            f"{a}|{b}": self.values[a] - self.values[b]
            for i, a in enumerate(keys)
            for b in keys[i + 1 :]
        }
