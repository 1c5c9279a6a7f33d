"""Seeded randomized campaigns for the conjectures, remainder terms and identities.

Every trial draws from ``make_rng(seed, trial)`` and nothing else, so any row can be
regenerated from the campaign name, its seed and the trial index.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone

UTC = timezone.utc
from itertools import combinations
import logging
import math
import time
from typing import Any

import numpy as np

from renyilab import __version__
from renyilab.channels import Povm, apply, random_channel, unitary_channel
from renyilab.contracts.models import (
    CampaignAggregate,
    CampaignReport,
    CampaignSpec,
    ReportMetadata,
    TrialRecord,
)
from renyilab.contracts.types import RemainderKind
from renyilab.errors import InvalidOrder
from renyilab.info import classical_conditioning_value, renyi_cmi, sandwiched_cmi
from renyilab.info.order import VN_WINDOW
from renyilab.measures import rank_one_refinement_test
from renyilab.observability.metrics import TRIAL_DURATION, TRIALS, VIOLATIONS
from renyilab.observability.telemetry import set_attributes, traced
from renyilab.orchestrator.pool import WorkQueue
from renyilab.reldiff import (
    RelDiffInstance,
    delta_alpha,
    delta_tilde_alpha,
    discord_remainder,
    holevo_remainder,
    joint_convexity_remainder,
    monotonicity_remainder,
    unitary_channel_exact_mono,
)
from renyilab.settings import get_settings
from renyilab.states import (
    flagged_state,
    make_rng,
    random_density,
    random_four_party_pure,
    random_strict_density,
    random_unitary,
)

logger = logging.getLogger(__name__)

CONJECTURE1_ALPHAS = (0.5, 1.5, 2.0)
CONJECTURE2_ALPHAS = (0.25, 0.5, 0.75, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0)
CMI_MONO_ALPHAS = (0.5, 0.75, 1.0, 1.5, 2.0, 3.0)
DUALITY_ALPHAS = (0.3, 0.7, 1.5, 2.0)
REFINEMENT_ALPHAS = (0.5, 1.5, 2.0)
DEFAULT_DIMS = (2, 3)

# proven pairs for unitary channels: alpha + beta = 2 and 1/alpha + 1/beta = 2
UNITARY_PETZ_PAIR = (0.5, 1.5)
UNITARY_SANDWICHED_PAIR = (2.0 / 3.0, 2.0)


@dataclass(slots=True)
class TrialOutcome:
    """Rows of one trial plus margins of positive controls keyed by control name."""

    rows: list[TrialRecord] = field(default_factory=list)
    controls: dict[str, list[float]] = field(default_factory=dict)


TrialFn = Callable[[CampaignSpec, int, np.random.Generator], TrialOutcome]


def _record(
    spec: CampaignSpec,
    trial: int,
    margin: float,
    params: dict[str, Any],
    values: dict[str, float],
) -> TrialRecord:
    threshold = spec.violation_threshold
    return TrialRecord(
        campaign=spec.name,
        trial=trial,
        seed=spec.seed,
        params=params,
        values={k: float(v) for k, v in values.items()},
        margin=float(margin),
        violation=margin < threshold,
        near_violation=threshold <= margin < 0.0,
    )


def _pick(rng: np.random.Generator, dims: Sequence[int]) -> int:
    return int(rng.choice(np.asarray(dims)))


def _reject_eps(spec: CampaignSpec) -> float:
    return float(spec.options.get("reject_eps", get_settings().reject_eps))


def _conjecture1(spec: CampaignSpec, trial: int, rng: np.random.Generator) -> TrialOutcome:
    d = _pick(rng, spec.dims)
    d_out = _pick(rng, spec.dims)
    rho = random_density((d, d, d), rng, labels=("A", "B", "E"))
    on_a = random_channel(d, d_out, rng)
    on_b = random_channel(d, d_out, rng)
    after_a = apply(on_a, rho, "A")
    after_b = apply(on_b, rho, "B")
    out = TrialOutcome(controls={"b-side": []})
    for alpha in spec.alpha_grid:
        before = renyi_cmi(rho, alpha, "A", "B", "E")
        after = renyi_cmi(after_a, alpha, "A", "B", "E")
        params = {"alpha": alpha, "d": d, "d_out": d_out}
        numbers = {"cmi": before, "cmi_after": after}
        out.rows.append(_record(spec, trial, before - after, params, numbers))
        out.controls["b-side"].append(before - renyi_cmi(after_b, alpha, "A", "B", "E"))
    return out


def _order_pairs(spec: CampaignSpec) -> list[tuple[float, float]]:
    if spec.beta_grid:
        return [(a, b) for a in spec.alpha_grid for b in spec.beta_grid if a < b]
    return list(combinations(sorted(spec.alpha_grid), 2))


def _conjecture2(spec: CampaignSpec, trial: int, rng: np.random.Generator) -> TrialOutcome:
    d_in = _pick(rng, spec.dims)
    d_out = _pick(rng, spec.dims)
    inst = RelDiffInstance.random(d_in, d_out, rng, _reject_eps(spec))
    variants = spec.options.get("variants", ["petz", "sandwiched"])
    pairs = _order_pairs(spec)
    orders = sorted({x for pair in pairs for x in pair})
    out = TrialOutcome()
    for variant in variants:
        fn = delta_tilde_alpha if variant == "sandwiched" else delta_alpha
        values = {alpha: fn(inst, alpha) for alpha in orders}
        for alpha, beta in pairs:
            params = {
                "alpha": alpha,
                "beta": beta,
                "d_in": d_in,
                "d_out": d_out,
                "variant": variant,
            }
            numbers = {"delta_alpha": values[alpha], "delta_beta": values[beta]}
            out.rows.append(_record(spec, trial, values[beta] - values[alpha], params, numbers))
    if spec.options.get("unitary_control", True):
        rotation = unitary_channel(random_unitary(d_in, rng))
        unitary = RelDiffInstance(rho=inst.rho, sigma=inst.sigma, channel=rotation)
        out.controls["unitary"] = [
            unitary_channel_exact_mono(unitary, *UNITARY_PETZ_PAIR),
            unitary_channel_exact_mono(unitary, *UNITARY_SANDWICHED_PAIR, sandwiched=True),
        ]
    return out


def _cmi_alpha_mono(spec: CampaignSpec, trial: int, rng: np.random.Generator) -> TrialOutcome:
    d = _pick(rng, spec.dims)
    rho = random_strict_density((d, d, d), rng, _reject_eps(spec), labels=("A", "B", "C"))
    grid = sorted(spec.alpha_grid)
    values = {f"alpha={alpha:g}": sandwiched_cmi(rho, alpha) for alpha in grid}
    ordered = list(values.values())
    steps = [b - a for a, b in zip(ordered, ordered[1:], strict=False)]
    margin = min(steps) if steps else 0.0
    return TrialOutcome(rows=[_record(spec, trial, margin, {"d": d}, values)])


def _remainder(spec: CampaignSpec, trial: int, rng: np.random.Generator) -> TrialOutcome:
    kind = RemainderKind(spec.options.get("kind", RemainderKind.MONOTONICITY.value))
    eps = _reject_eps(spec)
    d = _pick(rng, spec.dims)
    params: dict[str, Any] = {"kind": kind.value, "d": d}
    values: dict[str, float] = {}
    if kind is RemainderKind.MONOTONICITY:
        d_out = _pick(rng, spec.dims)
        params["d_out"] = d_out
        margin = monotonicity_remainder(RelDiffInstance.random(d, d_out, rng, eps))
    elif kind is RemainderKind.JOINT_CONVEXITY:
        n = int(spec.options.get("n_terms", 2))
        probs = rng.dirichlet(np.ones(n))
        rhos = [random_strict_density(d, rng, eps, labels=("B",)) for _ in range(n)]
        sigmas = [random_strict_density(d, rng, eps, labels=("B",)) for _ in range(n)]
        outcome = joint_convexity_remainder(probs, rhos, sigmas)
        margin = outcome.margin
        values = {
            "flagged_margin": outcome.flagged_margin,
            "equivalence_gap": outcome.equivalence_gap,
        }
    elif kind is RemainderKind.HOLEVO:
        n = int(spec.options.get("n_states", 3))
        probs = rng.dirichlet(np.ones(n))
        states = [random_density(d, rng, labels=("B",)) for _ in range(n)]
        povm = Povm.random_rank_one(d, int(spec.options.get("n_outcomes", d + 1)), rng)
        holevo = holevo_remainder(probs, states, povm)
        margin = holevo.margin
        values = {"holevo_gap": holevo.holevo_gap, "mutual_info_xb": holevo.mutual_info_xb}
    else:
        rho = random_density((d, d), rng, labels=("A", "B"))
        povm = Povm.random_rank_one(d, int(spec.options.get("n_outcomes", d)), rng)
        margin = discord_remainder(rho, povm)
    values["margin"] = margin
    return TrialOutcome(rows=[_record(spec, trial, margin, params, values)])


def _refinement(spec: CampaignSpec, trial: int, rng: np.random.Generator) -> TrialOutcome:
    d = _pick(rng, spec.dims)
    rho = random_density((d, d), rng, labels=("A", "B"))
    fine = Povm.random_rank_one(d, 2 * d, rng)
    coarse = fine.coarse_grain([(2 * k, 2 * k + 1) for k in range(d)])
    out = TrialOutcome()
    for alpha in spec.alpha_grid:
        margin = rank_one_refinement_test(rho, coarse, alpha)
        out.rows.append(_record(spec, trial, margin, {"alpha": alpha, "d": d}, {}))
    return out


def _duality(spec: CampaignSpec, trial: int, rng: np.random.Generator) -> TrialOutcome:
    d = _pick(rng, spec.dims)
    rho = random_four_party_pure(rng, (d, d, d, d)).density()
    out = TrialOutcome()
    for alpha in spec.alpha_grid:
        left = renyi_cmi(rho, alpha, "A", "B", "C")
        right = renyi_cmi(rho, alpha, "B", "A", "D")
        numbers = {"cmi_abc": left, "cmi_bad": right}
        out.rows.append(_record(spec, trial, -abs(left - right), {"alpha": alpha, "d": d}, numbers))
    return out


def _lemmas(spec: CampaignSpec, trial: int, rng: np.random.Generator) -> TrialOutcome:
    """Tensor-product additivity and the classical-conditioning formula, as negated gaps."""
    d = _pick(rng, spec.dims)
    rho = random_density((d, d, d), rng, labels=("A", "B", "E"))
    tau = random_density((d, d, d), rng, labels=("A2", "B2", "E2"))
    product = rho.tensor(tau)
    probs = rng.dirichlet(np.ones(2))
    parts = [random_density((d, d, d), rng, labels=("A", "B", "E")) for _ in range(2)]
    flagged = flagged_state(probs, parts)
    out = TrialOutcome()
    for alpha in spec.alpha_grid:
        joint = renyi_cmi(product, alpha, ("A", "A2"), ("B", "B2"), ("E", "E2"))
        split = renyi_cmi(rho, alpha) + renyi_cmi(tau, alpha, "A2", "B2", "E2")
        conditioned = renyi_cmi(flagged, alpha, "A", "B", ("X", "E"))
        formula = classical_conditioning_value(probs, [renyi_cmi(p, alpha) for p in parts], alpha)
        gaps = {"tensor_gap": abs(joint - split), "conditioning_gap": abs(conditioned - formula)}
        out.rows.append(_record(spec, trial, -max(gaps.values()), {"alpha": alpha, "d": d}, gaps))
    return out


TRIAL_FUNCTIONS: dict[str, TrialFn] = {
    "c1": _conjecture1,
    "c2": _conjecture2,
    "delta-mono": _conjecture2,
    "cmi-mono": _cmi_alpha_mono,
    "remainder": _remainder,
    "refinement": _refinement,
    "duality": _duality,
    "lemmas": _lemmas,
}


def _check_grid(grid: Sequence[float]) -> None:
    for alpha in grid:
        if alpha <= 0 or 0.0 < abs(alpha - 1.0) < VN_WINDOW:
            raise InvalidOrder(
                f"order {alpha} is non-positive or too close to 1 to be read as a Rényi order"
            )


def aggregate(margins: Sequence[float], threshold: float) -> CampaignAggregate:
    return CampaignAggregate(
        trials=len(margins),
        min_margin=min(margins) if margins else math.inf,
        mean_margin=float(np.mean(margins)) if margins else 0.0,
        violations=sum(1 for m in margins if m < threshold),
        near_violations=sum(1 for m in margins if threshold <= m < 0.0),
    )


def _report_row(row: TrialRecord) -> None:
    payload = {
        "campaign": row.campaign,
        "trial": row.trial,
        "seed": row.seed,
        "margin": row.margin,
        **row.params,
    }
    if row.violation:
        VIOLATIONS.labels(campaign=row.campaign).inc()
        logger.warning("campaign.violation", extra={"extra": payload})
    elif row.near_violation:
        logger.info("campaign.near_violation", extra={"extra": payload})


def run_campaign(spec: CampaignSpec, *, workers: int | None = None) -> CampaignReport:
    """Run every trial of ``spec`` and reduce rows in trial order."""
    trial_fn = TRIAL_FUNCTIONS[spec.name]
    _check_grid(spec.alpha_grid)
    _check_grid(spec.beta_grid)
    n_workers = workers or get_settings().workers
    started_at = datetime.now(UTC)
    start = time.perf_counter()

    def task(trial: int) -> TrialOutcome:
        with TRIAL_DURATION.labels(campaign=spec.name).time():
            outcome = trial_fn(spec, trial, make_rng(spec.seed, trial))
        TRIALS.labels(campaign=spec.name).inc()
        return outcome

    with traced(
        f"campaign.{spec.name}", trials=spec.trials, seed=spec.seed, workers=n_workers
    ) as span:
        outcomes = WorkQueue(workers=n_workers, name=f"campaign-{spec.name}").map(task, spec.trials)
        rows = [row for outcome in outcomes for row in outcome.rows]
        for row in rows:
            _report_row(row)
        control_margins: dict[str, list[float]] = {}
        for outcome in outcomes:
            for key, margins in outcome.controls.items():
                control_margins.setdefault(key, []).extend(margins)
        summary = aggregate([row.margin for row in rows], spec.violation_threshold)
        controls = {
            key: aggregate(m, spec.violation_threshold)
            for key, m in sorted(control_margins.items())
        }
        set_attributes(span, {"min_margin": summary.min_margin, "violations": summary.violations})

    logger.info(
        "campaign.finished",
        extra={
            "extra": {
                "campaign": spec.name,
                "trials": spec.trials,
                "min_margin": summary.min_margin,
                "violations": summary.violations,
            }
        },
    )
    metadata = ReportMetadata(
        started_at=started_at,
        wall_time_s=time.perf_counter() - start,
        version=__version__,
        workers=n_workers,
    )
    return CampaignReport(
        spec=spec, rows=rows, aggregate=summary, controls=controls, metadata=metadata
    )


def _spec(
    name: str,
    trials: int,
    seed: int,
    dims: Sequence[int],
    alpha_grid: Sequence[float] = (),
    beta_grid: Sequence[float] = (),
    **options: Any,
) -> CampaignSpec:
    return CampaignSpec(
        name=name,
        seed=seed,
        trials=trials,
        dims=list(dims),
        alpha_grid=list(alpha_grid),
        beta_grid=list(beta_grid),
        options=options,
        violation_threshold=get_settings().violation_threshold,
    )


def run_conjecture1(
    dims: Sequence[int] = DEFAULT_DIMS,
    alpha_grid: Sequence[float] = CONJECTURE1_ALPHAS,
    trials: int = 1000,
    seed: int = 0,
    *,
    workers: int | None = None,
) -> CampaignReport:
    """I_alpha(A;B|E) - I_alpha(A';B|E) under random channels on A, with the B side as control."""
    return run_campaign(_spec("c1", trials, seed, dims, alpha_grid), workers=workers)


def run_conjecture2(
    dims: Sequence[int] = DEFAULT_DIMS,
    alpha_grid: Sequence[float] = CONJECTURE2_ALPHAS,
    trials: int = 1000,
    seed: int = 0,
    *,
    beta_grid: Sequence[float] = (),
    variants: Sequence[str] = ("petz", "sandwiched"),
    reject_eps: float | None = None,
    workers: int | None = None,
) -> CampaignReport:
    """Delta_beta - Delta_alpha for alpha < beta on random strict instances; in and out dimensions drawn independently."""
    options: dict[str, Any] = {"variants": list(variants)}
    if reject_eps is not None:
        options["reject_eps"] = reject_eps
    spec = _spec("c2", trials, seed, dims, alpha_grid, beta_grid, **options)
    return run_campaign(spec, workers=workers)


def run_cmi_alpha_mono(
    dims: Sequence[int] = DEFAULT_DIMS,
    alpha_grid: Sequence[float] = CMI_MONO_ALPHAS,
    trials: int = 200,
    seed: int = 0,
    *,
    workers: int | None = None,
) -> CampaignReport:
    return run_campaign(_spec("cmi-mono", trials, seed, dims, alpha_grid), workers=workers)


def run_remainder_campaign(
    kind: RemainderKind | str,
    dims: Sequence[int] = DEFAULT_DIMS,
    trials: int = 500,
    seed: int = 0,
    *,
    workers: int | None = None,
) -> CampaignReport:
    spec = _spec("remainder", trials, seed, dims, kind=RemainderKind(kind).value)
    return run_campaign(spec, workers=workers)


def run_refinement_campaign(
    dims: Sequence[int] = DEFAULT_DIMS,
    alpha_grid: Sequence[float] = REFINEMENT_ALPHAS,
    trials: int = 100,
    seed: int = 0,
    *,
    workers: int | None = None,
) -> CampaignReport:
    """Coarse minus refined discord objective for random POVMs with rank-two effects."""
    return run_campaign(_spec("refinement", trials, seed, dims, alpha_grid), workers=workers)


def run_duality_campaign(
    alpha_grid: Sequence[float] = DUALITY_ALPHAS,
    trials: int = 500,
    seed: int = 0,
    *,
    dims: Sequence[int] = (2,),
    workers: int | None = None,
) -> CampaignReport:
    """-|I_alpha(A;B|C) - I_alpha(B;A|D)| on Haar-random four-party pure states."""
    return run_campaign(_spec("duality", trials, seed, dims, alpha_grid), workers=workers)


def run_lemma_campaign(
    alpha_grid: Sequence[float] = DUALITY_ALPHAS,
    trials: int = 100,
    seed: int = 0,
    *,
    dims: Sequence[int] = (2,),
    workers: int | None = None,
) -> CampaignReport:
    return run_campaign(_spec("lemmas", trials, seed, dims, alpha_grid), workers=workers)
