"""Property suite: identities and proven inequalities gate, conjectural margins warn."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from datetime import datetime, timezone

UTC = timezone.utc
import logging
import math
import time

import numpy as np

from renyilab import __version__
from renyilab.channels import (
    Povm,
    QuantumChannel,
    apply,
    choi_min_eigenvalue,
    classical_channel,
    depolarizing,
    measure_prepare_channel,
    measurement_channel,
    measurement_dilation,
    petz_map,
    random_channel,
    unitary_channel,
)
from renyilab.contracts.models import CheckResult, OptimizerConfig, ReportMetadata, SuiteReport
from renyilab.contracts.types import RemainderKind
from renyilab.gatekeeper import Gatekeeper, ToleranceConfig
from renyilab.info import (
    renyi_cmi,
    renyi_cmi_optimized_check,
    renyi_cmi_petz,
    renyi_entropy,
    renyi_relative_entropy,
    sandwiched_cmi,
    sandwiched_relative_entropy,
    vn_cmi,
    vn_entropy,
    vn_relative_entropy,
)
from renyilab.linalg import (
    SubsystemShape,
    matrix_exp,
    matrix_log,
    matrix_power,
    partial_trace,
    trace_norm,
)
from renyilab.measures import (
    convexity_gap,
    discord_renyi,
    squashed_entanglement,
    subadditivity_gap,
)
from renyilab.observability.metrics import CHECK_FAILURES
from renyilab.observability.telemetry import set_attributes, traced
from renyilab.orchestrator.campaigns import (
    run_cmi_alpha_mono,
    run_conjecture1,
    run_conjecture2,
    run_duality_campaign,
    run_lemma_campaign,
    run_refinement_campaign,
    run_remainder_campaign,
)
from renyilab.reldiff import (
    RelDiffInstance,
    alpha_slope_check,
    delta_alpha,
    delta_tilde_alpha,
    delta_vn,
    variance_v,
)
from renyilab.settings import get_settings
from renyilab.states import (
    DensityOperator,
    fidelity,
    make_rng,
    random_cq_state,
    random_density,
    random_pure,
    random_pure_ensemble,
    random_separable_ensemble,
    random_strict_density,
    random_unitary,
    trace_distance,
)

logger = logging.getLogger(__name__)

CheckFn = Callable[[int, int], tuple[float, str]]

NEAR_ONE = (1.0 - 1e-4, 1.0 + 1e-4)
DATA_PROCESSING_ALPHAS = (0.3, 0.7, 1.5, 2.0)
ORDER_GRID = (0.25, 0.5, 0.75, 1.25, 1.5, 2.0)


def _deficit(min_margin: float) -> float:
    return max(0.0, -min_margin)


def _strict_tripartite(rng: np.random.Generator) -> DensityOperator:
    return random_strict_density((2, 2, 2), rng, get_settings().reject_eps, labels=("A", "B", "C"))


def _hermitian_calculus(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rng = make_rng(seed, 1, t)
        rho = random_strict_density(int(rng.integers(2, 5)), rng, get_settings().reject_eps).matrix
        root = matrix_power(rho, 0.5)
        worst = max(worst, float(np.max(np.abs(root @ root - rho))))
        worst = max(worst, float(np.max(np.abs(matrix_exp(matrix_log(rho)) - rho))))
    return worst, "sqrt(rho)^2 and exp(log rho) reproduce rho"


def _sibson_consistency(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rho = random_density((2, 2, 2), make_rng(seed, 2, t), labels=("A", "B", "E"))
        for alpha in (0.5, 2.0):
            closed = renyi_cmi(rho, alpha)
            numeric = renyi_cmi_optimized_check(rho, alpha, seed=seed + t)
            worst = max(worst, abs(numeric - closed))
    return worst, "closed form against numerical minimization over sigma_BE"


def _delta_cmi_consistency(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rho = _strict_tripartite(make_rng(seed, 3, t))
        inst = RelDiffInstance.consistency(rho)
        for alpha in (0.5, 1.5, 2.0):
            worst = max(worst, abs(delta_alpha(inst, alpha) - renyi_cmi_petz(rho, alpha)))
            worst = max(worst, abs(delta_tilde_alpha(inst, alpha) - sandwiched_cmi(rho, alpha)))
    return worst, "Delta and tilde Delta at (rho, rho_B rho_AC, Tr_A) against the CMIs"


def _von_neumann_limits(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rng = make_rng(seed, 4, t)
        rho = _strict_tripartite(rng)
        sigma = _strict_tripartite(rng)
        inst = RelDiffInstance.random(2, 2, rng)
        cmi = vn_cmi(rho, "A", "B", "C")
        for alpha in NEAR_ONE:
            gaps = (
                renyi_entropy(rho, alpha) - vn_entropy(rho),
                renyi_relative_entropy(rho, sigma, alpha) - vn_relative_entropy(rho, sigma),
                sandwiched_relative_entropy(rho, sigma, alpha) - vn_relative_entropy(rho, sigma),
                renyi_cmi(rho, alpha, "A", "B", "C") - cmi,
                renyi_cmi_petz(rho, alpha) - cmi,
                sandwiched_cmi(rho, alpha) - cmi,
                delta_alpha(inst, alpha) - delta_vn(inst),
                delta_tilde_alpha(inst, alpha) - delta_vn(inst),
            )
            worst = max(worst, max(abs(g) for g in gaps))
    return worst, "every Rényi quantity at 1 +- 1e-4 against its von Neumann value"


def _variance_nonnegative(seed: int, trials: int) -> tuple[float, str]:
    instances = (RelDiffInstance.random(2, 2, make_rng(seed, 5, t)) for t in range(trials))
    lowest = min(variance_v(inst) for inst in instances)
    return _deficit(lowest), "V(rho, sigma, N) >= 0"


def _alpha_slope(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    skipped = 0
    for t in range(trials):
        check = alpha_slope_check(RelDiffInstance.random(2, 2, make_rng(seed, 6, t)))
        if check.skipped:
            skipped += 1
            continue
        worst = max(worst, check.relative_error)
    return worst, f"relative error of the slope at alpha=1 against V/2; {skipped} skipped"


def _relative_entropy_monotonicity(seed: int, trials: int) -> tuple[float, str]:
    instances = (RelDiffInstance.random(3, 2, make_rng(seed, 7, t)) for t in range(trials))
    lowest = min(delta_vn(inst) for inst in instances)
    return _deficit(lowest), "D(rho||sigma) - D(N rho||N sigma) >= 0"


def _renyi_data_processing(seed: int, trials: int) -> tuple[float, str]:
    lowest = math.inf
    for t in range(trials):
        rng = make_rng(seed, 10, t)
        d_in, d_out = (int(d) for d in rng.integers(2, 5, size=2))
        inst = RelDiffInstance.random(d_in, d_out, rng)
        for alpha in DATA_PROCESSING_ALPHAS:
            before = renyi_relative_entropy(inst.rho, inst.sigma, alpha)
            lowest = min(lowest, before - renyi_relative_entropy(inst.n_rho, inst.n_sigma, alpha))
            if alpha >= 0.5:
                before = sandwiched_relative_entropy(inst.rho, inst.sigma, alpha)
                after = sandwiched_relative_entropy(inst.n_rho, inst.n_sigma, alpha)
                lowest = min(lowest, before - after)
    return _deficit(lowest), "D_alpha(rho||sigma) - D_alpha(N rho||N sigma) >= 0"


def _renyi_alpha_monotonicity(seed: int, trials: int) -> tuple[float, str]:
    lowest = math.inf
    for t in range(trials):
        rng = make_rng(seed, 11, t)
        d = int(rng.integers(2, 5))
        rho = random_strict_density(d, rng, get_settings().reject_eps)
        sigma = random_strict_density(d, rng, get_settings().reject_eps)
        for divergence in (renyi_relative_entropy, sandwiched_relative_entropy):
            values = [divergence(rho, sigma, alpha) for alpha in ORDER_GRID]
            lowest = min(lowest, float(np.min(np.diff(values))))
    return _deficit(lowest), "D_alpha and tilde D_alpha nondecreasing along the order grid"


def _constructed_channels(rng: np.random.Generator) -> list[QuantumChannel]:
    d_in, d_out = (int(d) for d in rng.integers(2, 5, size=2))
    sigma = random_strict_density(d_in, rng, get_settings().reject_eps).matrix
    channel = random_channel(d_in, d_out, rng)
    povm = Povm.random_rank_one(d_in, d_in + 1, rng)
    return [
        channel,
        depolarizing(d_in, float(rng.uniform())),
        classical_channel(rng.dirichlet(np.ones(d_out), size=d_in).T),
        unitary_channel(random_unitary(d_in, rng)),
        measurement_channel(povm),
        measure_prepare_channel(sigma, povm),
        petz_map(sigma, channel),
    ]


def _choi_cptp(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        for channel in _constructed_channels(make_rng(seed, 12, t)):
            shape = SubsystemShape(dims=(channel.d_in, channel.d_out), labels=("in", "out"))
            reduced = partial_trace(channel.choi(), shape, ("in",))
            worst = max(
                worst,
                -choi_min_eigenvalue(channel),
                float(np.max(np.abs(reduced - np.eye(channel.d_in) / channel.d_in))),
            )
    return worst, "Choi state PSD with input marginal I/d_in for every constructed channel"


def _petz_fixed_point(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rng = make_rng(seed, 13, t)
        d_in, d_out = (int(d) for d in rng.integers(2, 5, size=2))
        sigma = random_strict_density(d_in, rng, get_settings().reject_eps).matrix
        channel = random_channel(d_in, d_out, rng)
        recovered = petz_map(sigma, channel)(channel(sigma))
        worst = max(worst, trace_norm(recovered - sigma))
    return worst, "||T(N(sigma)) - sigma||_1 for the Petz map of (sigma, N)"


def _measurement_dilation(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rng = make_rng(seed, 14, t)
        d = int(rng.integers(2, 4))
        rho = random_density((d, 2), rng, labels=("A", "B"))
        povm = Povm.random_rank_one(d, 2 * d, rng)
        if t % 2:
            povm = povm.coarse_grain([range(d), range(d, 2 * d)])
        dilation = measurement_dilation(povm)
        dilated = dilation.apply(rho, "A").marginal(("X", "B"))
        expected = apply(measurement_channel(povm), rho, "A", "X").matrix
        error = float(np.linalg.norm(dilated - expected))
        worst = max(worst, dilation.isometry.residual(), error)
    return worst, "dilation traced over its environment against the measurement channel"


def _fuchs_van_de_graaf(seed: int, trials: int) -> tuple[float, str]:
    lowest = math.inf
    for t in range(trials):
        rng = make_rng(seed, 15, t)
        rho, sigma = random_density(2, rng), random_density(2, rng)
        root = math.sqrt(min(1.0, max(0.0, fidelity(rho, sigma))))
        half = trace_distance(rho, sigma) / 2.0
        lowest = min(lowest, half - (1.0 - root), math.sqrt(1.0 - root * root) - half)
    return _deficit(lowest), "1 - sqrt(F) <= T/2 <= sqrt(1 - F) on qubit pairs"


def _duality(seed: int, trials: int) -> tuple[float, str]:
    report = run_duality_campaign(trials=trials, seed=seed)
    return _deficit(report.aggregate.min_margin), "I(A;B|C) = I(B;A|D) on four-party pure states"


def _lemmas(seed: int, trials: int) -> tuple[float, str]:
    report = run_lemma_campaign(trials=trials, seed=seed)
    detail = "tensor-product additivity and classical conditioning"
    return _deficit(report.aggregate.min_margin), detail


def _b_side_monotonicity(seed: int, trials: int) -> tuple[float, str]:
    report = run_conjecture1(dims=(2,), trials=trials, seed=seed)
    return _deficit(report.controls["b-side"].min_margin), "I(A;B|E) under channels on B"


def _conjecture1(seed: int, trials: int) -> tuple[float, str]:
    report = run_conjecture1(dims=(2,), trials=trials, seed=seed)
    return _deficit(report.aggregate.min_margin), f"{report.aggregate.violations} violations"


def _unitary_exact_mono(seed: int, trials: int) -> tuple[float, str]:
    report = run_conjecture2(dims=(2, 3), alpha_grid=(0.5, 2.0), trials=trials, seed=seed)
    detail = "proven order pairs for unitary channels"
    return _deficit(report.controls["unitary"].min_margin), detail


def _conjecture2(seed: int, trials: int) -> tuple[float, str]:
    report = run_conjecture2(dims=(2, 3), trials=trials, seed=seed)
    return _deficit(report.aggregate.min_margin), f"{report.aggregate.violations} violations"


def _cmi_alpha_mono(seed: int, trials: int) -> tuple[float, str]:
    report = run_cmi_alpha_mono(dims=(2,), trials=trials, seed=seed)
    return _deficit(report.aggregate.min_margin), f"{report.aggregate.violations} violations"


def _remainder(kind: RemainderKind) -> CheckFn:
    def check(seed: int, trials: int) -> tuple[float, str]:
        report = run_remainder_campaign(kind, dims=(2,), trials=trials, seed=seed)
        return _deficit(report.aggregate.min_margin), f"{report.aggregate.violations} violations"

    return check


def _joint_convexity_equivalence(seed: int, trials: int) -> tuple[float, str]:
    report = run_remainder_campaign(
        RemainderKind.JOINT_CONVEXITY, dims=(2,), trials=trials, seed=seed
    )
    worst = max(row.values["equivalence_gap"] for row in report.rows)
    return worst, "joint-convexity margin against the flagged monotonicity margin"


def _holevo_bound(seed: int, trials: int) -> tuple[float, str]:
    report = run_remainder_campaign(RemainderKind.HOLEVO, dims=(2,), trials=trials, seed=seed)
    return _deficit(min(row.values["holevo_gap"] for row in report.rows)), "I(X;B) >= I(X;Y)"


def _rank_one_refinement(seed: int, trials: int) -> tuple[float, str]:
    report = run_refinement_campaign(dims=(2,), trials=trials, seed=seed)
    return _deficit(report.aggregate.min_margin), "refined POVM never raises the discord objective"


def _suite_optimizer(seed: int) -> OptimizerConfig:
    return OptimizerConfig(restarts=2, max_iters=2000, seed=seed)


def _squashed_pure_oracle(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rho = random_pure((2, 2), make_rng(seed, 8, t)).density()
        for alpha in (0.5, 1.5):
            value = squashed_entanglement(rho, alpha, ext_dim=1, cfg=_suite_optimizer(seed)).value
            expected = renyi_entropy(rho.marginal("A"), (2.0 - alpha) / alpha)
            worst = max(worst, abs(value - expected))
    return worst, "pure states against H_(2-alpha)/alpha of the marginal"


def _discord_cq_vanishing(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        rho = random_cq_state(2, 2, make_rng(seed, 9, t), flag_label="A", label="B")
        result = discord_renyi(rho, 1.5, n_outcomes=2, cfg=_suite_optimizer(seed))
        worst = max(worst, abs(result.value))
    return worst, "discord of classical-quantum states"


def _squashed_separable_vanishing(seed: int, trials: int) -> tuple[float, str]:
    worst = 0.0
    for t in range(trials):
        ensemble = random_separable_ensemble(2, 2, 3, make_rng(seed, 18, t))
        result = squashed_entanglement(
            ensemble.average(), 0.5, 3, _suite_optimizer(seed), warm_start=ensemble
        )
        worst = max(worst, abs(result.value))
    return worst, "separable two-qubit states from their flag extension"


def _squashed_convexity(seed: int, trials: int) -> tuple[float, str]:
    lowest = math.inf
    for t in range(trials):
        ensemble = random_pure_ensemble((2, 2), 3, make_rng(seed, 16, t))
        lowest = min(lowest, convexity_gap(ensemble, 0.5, _suite_optimizer(seed)))
    return _deficit(lowest), "sum_x p_x E^sq(rho_x) >= E^sq(sum_x p_x rho_x) at alpha=0.5"


def _squashed_subadditivity(seed: int, trials: int) -> tuple[float, str]:
    lowest = math.inf
    for t in range(trials):
        rng = make_rng(seed, 17, t)
        sigma = random_density((2, 2), rng, rank=2)
        tau = random_density((2, 2), rng, rank=2)
        alpha = (0.5, 1.5)[t % 2]
        gap = subadditivity_gap(sigma, tau, alpha, _suite_optimizer(seed), ext_dim=2)
        lowest = min(lowest, gap)
    return _deficit(lowest), "E^sq(sigma (x) tau) <= E^sq(sigma) + E^sq(tau)"




SUITE_CHECKS: dict[str, CheckFn] = {
    "hermitian_calculus": _hermitian_calculus,
    "duality": _duality,
    "sibson_consistency": _sibson_consistency,
    "cmi_identities": _lemmas,
    "delta_cmi_consistency": _delta_cmi_consistency,
    "von_neumann_limits": _von_neumann_limits,
    "variance_nonnegative": _variance_nonnegative,
    "alpha_slope": _alpha_slope,
    "relative_entropy_monotonicity": _relative_entropy_monotonicity,
    "renyi_data_processing": _renyi_data_processing,
    "renyi_alpha_monotonicity": _renyi_alpha_monotonicity,
    "choi_cptp": _choi_cptp,
    "petz_fixed_point": _petz_fixed_point,
    "measurement_dilation": _measurement_dilation,
    "fuchs_van_de_graaf": _fuchs_van_de_graaf,
    "b_side_monotonicity": _b_side_monotonicity,
    "unitary_exact_mono": _unitary_exact_mono,
    "holevo_bound": _holevo_bound,
    "joint_convexity_equivalence": _joint_convexity_equivalence,
    "squashed_pure_oracle": _squashed_pure_oracle,
    "squashed_separable_vanishing": _squashed_separable_vanishing,
    "discord_cq_vanishing": _discord_cq_vanishing,
    "squashed_convexity": _squashed_convexity,
    "squashed_subadditivity": _squashed_subadditivity,
    "conjecture1": _conjecture1,
    "conjecture2": _conjecture2,
    "cmi_alpha_mono": _cmi_alpha_mono,
    "remainder_monotonicity": _remainder(RemainderKind.MONOTONICITY),
    "remainder_joint_convexity": _remainder(RemainderKind.JOINT_CONVEXITY),
    "remainder_holevo": _remainder(RemainderKind.HOLEVO),
    "remainder_discord": _remainder(RemainderKind.DISCORD),
    "rank_one_refinement": _rank_one_refinement,
}


def run_property_suite(
    seed: int = 0,
    *,
    policy: ToleranceConfig | None = None,
    scale: float = 1.0,
    tolerance_scale: float = 1.0,
    only: Sequence[str] | None = None,
) -> SuiteReport:
    """Run every configured check at ``seed`` and hand the results to the gatekeeper.

    ``scale`` multiplies the configured trial counts and ``tolerance_scale`` the tolerances.
    """
    config = policy or ToleranceConfig.load(get_settings().tolerances_path)
    if tolerance_scale != 1.0:
        config = config.scaled(tolerance_scale)
    started_at = datetime.now(UTC)
    start = time.perf_counter()
    checks: list[CheckResult] = []
    with traced("suite.run", seed=seed, checks=len(config.checks)) as span:
        for name, entry in config.checks.items():
            if only is not None and name not in only:
                continue
            fn = SUITE_CHECKS.get(name)
            if fn is None:
                logger.warning("suite.unknown_check", extra={"extra": {"check": name}})
                continue
            trials = max(1, round(entry.trials * scale))
            observed, detail = fn(seed, trials)
            result = CheckResult(
                name=name,
                gated=entry.gated,
                passed=observed <= entry.tolerance,
                observed=observed,
                tolerance=entry.tolerance,
                detail=detail,
            )
            logger.info(
                "suite.check.finished",
                extra={
                    "extra": {
                        "check": name,
                        "passed": result.passed,
                        "observed": observed,
                        "trials": trials,
                    }
                },
            )
            if not result.passed:
                CHECK_FAILURES.labels(check=name, gated=str(entry.gated).lower()).inc()
            checks.append(result)
        gate_policy = config
        if only is not None:
            gate_policy = ToleranceConfig(
                checks={k: v for k, v in config.checks.items() if k in only},
                decision_policy=config.decision_policy,
            )
        decision = Gatekeeper(gate_policy).decide(checks)
        set_attributes(span, {"verdict": decision.verdict, "gated_passed": decision.gated_passed})
    metadata = ReportMetadata(
        started_at=started_at,
        wall_time_s=time.perf_counter() - start,
        version=__version__,
        workers=get_settings().workers,
    )
    return SuiteReport(seed=seed, checks=checks, decision=decision, metadata=metadata)
