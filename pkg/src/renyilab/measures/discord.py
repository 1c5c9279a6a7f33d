"""Rényi quantum discord over rank-one POVMs, its pure-state form and the product-divergence variant."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
import logging
import math

import numpy as np
import numpy.typing as npt

from renyilab.channels import Povm, measurement_dilation, rank_one_dilation
from renyilab.contracts.models import MeasureResult, OptimizerConfig
from renyilab.contracts.serialization import encode_matrix
from renyilab.contracts.types import MeasureKind
from renyilab.errors import InvalidOrder, ShapeMismatch
from renyilab.info import RenyiOrder, renyi_cmi, vn_mutual_info
from renyilab.info.entropies import group
from renyilab.linalg import (
    Matrix,
    embed,
    hermitian_eigh,
    matrix_power,
    partial_trace,
    real_trace,
    sandwich,
)
from renyilab.measures.optimizer import minimize_over_isometries
from renyilab.states import DensityOperator, PureState

logger = logging.getLogger(__name__)

PROB_FLOOR = 1e-14


def _rest(rho: DensityOperator, a: str) -> tuple[str, ...]:
    rho.shape.index(a)
    return tuple(lab for lab in rho.labels if lab != a)


def discord_objective(
    rho: DensityOperator, rows: npt.ArrayLike, alpha: float, a: str = "A"
) -> float:
    """I_alpha(E;B|X) after the rank-one dilation with rows <phi_x| acts on ``a``."""
    omega = rank_one_dilation(rows).apply(rho, a)
    return renyi_cmi(omega, alpha, "E", _rest(rho, a), "X")


def basis_rows(d: int, n: int) -> Matrix:
    """Computational-basis measurement padded with empty outcomes."""
    rows = np.zeros((n, d), dtype=np.complex128)
    rows[:d] = np.eye(d)
    return rows


def eigenbasis_rows(rho: DensityOperator, n: int, a: str = "A") -> Matrix:
    _, v, _ = hermitian_eigh(rho.marginal(a), require_psd=False)
    rows = np.zeros((n, v.shape[0]), dtype=np.complex128)
    rows[: v.shape[0]] = v[:, ::-1].conj().T
    return rows


def _check_order(alpha: float) -> None:
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann or order.alpha > 2.0:
        raise InvalidOrder(f"discord is defined for alpha in (0,1) and (1,2], got {alpha}")


def discord_renyi(
    rho: DensityOperator,
    alpha: float,
    n_outcomes: int | None = None,
    cfg: OptimizerConfig | None = None,
    *,
    a: str = "A",
    warm_rows: Sequence[Matrix] = (),
) -> MeasureResult:
    """Minimum of :func:`discord_objective` over rank-one POVMs with ``n_outcomes`` outcomes (default d_A^2)."""
    _check_order(alpha)
    config = cfg or OptimizerConfig()
    d_a = rho.shape.dim(a)
    n = n_outcomes or d_a * d_a
    if n < d_a:
        raise ShapeMismatch(f"{n} rank-one outcomes cannot resolve dimension {d_a}")
    starts = [basis_rows(d_a, n), eigenbasis_rows(rho, n, a), *warm_rows]

    def objective(v: Matrix) -> float:
        return discord_objective(rho, v, alpha, a)

    outcome = minimize_over_isometries(
        objective, n, d_a, config, starts, label=MeasureKind.DISCORD.value
    )
    v = outcome.isometry
    residual = float(np.max(np.abs(v.conj().T @ v - np.eye(d_a))))
    return MeasureResult(
        measure=MeasureKind.DISCORD,
        alpha=alpha,
        value=outcome.value,
        converged=outcome.converged,
        evaluations=outcome.evaluations,
        feasibility_residual=residual,
        method=config.method,
        seed=config.seed,
        restart_index=outcome.restart_index,
        argmin={"n_outcomes": n, "rows": encode_matrix(v)},
    )


def discord_pure_objective(psi: PureState, povm: Povm, alpha: float, a: str = "A") -> float:
    """(alpha/(alpha-1)) log sum_x p(x) <xi_x|psi_B^(1-alpha)|xi_x>^(1/alpha) for a pure bipartite state.

    |xi_x> = <phi_x|psi>/sqrt(p(x)) and p(x) its squared norm.
    """
    rows = povm.rank_one_isometry()
    rho = psi.density()
    if RenyiOrder.parse(alpha).is_von_neumann:
        return discord_objective(rho, rows, 1.0, a)
    m = psi.bipartite_matrix([a])
    (b,) = _rest(rho, a)
    power = matrix_power(rho.marginal(b), 1.0 - alpha)
    total = 0.0
    for row in rows:
        k = row @ m
        p = float(np.real(np.vdot(k, k)))
        if p <= PROB_FLOOR:
            continue
        xi = k / math.sqrt(p)
        total += p * float(np.real(np.vdot(xi, power @ xi))) ** (1.0 / alpha)
    return alpha / (alpha - 1.0) * math.log(total)


def product_divergence(
    rho: DensityOperator,
    alpha: float,
    a: str | Iterable[str] = "A",
    b: str | Iterable[str] = "B",
    *,
    iters: int = 500,
    tol: float = 1e-12,
) -> float:
    """min over sigma_A (x) sigma_B of D_alpha(rho_AB || sigma_A (x) sigma_B), by alternating Sibson updates.

    Each half step replaces one marginal by the optimal sigma proportional to X^(1/alpha), so the
    value never increases. The von Neumann order returns I(A;B).
    """
    ga, gb = group(a), group(b)
    if RenyiOrder.parse(alpha).is_von_neumann:
        return vn_mutual_info(rho, ga, gb)
    state = rho.reduce(ga + gb)
    shape = state.shape
    la, lb = shape.keep(ga).labels, shape.keep(gb).labels
    r_alpha = matrix_power(state.matrix, alpha)
    sigma_a, sigma_b = state.marginal(la), state.marginal(lb)

    def update(
        fixed: Matrix, fixed_labels: tuple[str, ...], free_labels: tuple[str, ...]
    ) -> Matrix:
        side = embed(matrix_power(fixed, (1.0 - alpha) / 2.0), shape, fixed_labels)
        x = partial_trace(sandwich(side, r_alpha), shape, free_labels)
        root = matrix_power(x, 1.0 / alpha)
        return root / real_trace(root)

    def value(sa: Matrix, sb: Matrix) -> float:
        side_a = embed(matrix_power(sa, 1.0 - alpha), shape, la)
        reference = side_a @ embed(matrix_power(sb, 1.0 - alpha), shape, lb)
        q = real_trace(r_alpha @ reference)
        return math.inf if q <= 0 else math.log(q) / (alpha - 1.0)

    best = value(sigma_a, sigma_b)
    for _ in range(iters):
        sigma_a = update(sigma_b, lb, la)
        sigma_b = update(sigma_a, la, lb)
        current = value(sigma_a, sigma_b)
        if best - current <= tol:
            best = min(best, current)
            break
        best = current
    return best


def discord_mbpds(
    rho: DensityOperator,
    alpha: float,
    cfg: OptimizerConfig | None = None,
    *,
    n_outcomes: int | None = None,
    a: str = "A",
) -> MeasureResult:
    """min D_alpha(rho_AB || sigma_A (x) sigma_B) - max over rank-one POVMs of min D_alpha(rho_XB || sigma_X (x) sigma_B).

    Heuristic: the outer maximum is searched numerically, so the value is an upper bound.
    """
    config = cfg or OptimizerConfig()
    d_a = rho.shape.dim(a)
    n = n_outcomes or d_a * d_a
    rest = _rest(rho, a)
    total = product_divergence(rho, alpha, a, rest)

    def objective(v: Matrix) -> float:
        measured = rank_one_dilation(v).apply(rho, a).reduce(("X", *rest))
        return -product_divergence(measured, alpha, "X", rest)

    starts = [basis_rows(d_a, n), eigenbasis_rows(rho, n, a)]
    outcome = minimize_over_isometries(
        objective, n, d_a, config, starts, label=MeasureKind.DISCORD_MBPDS.value
    )
    v = outcome.isometry
    return MeasureResult(
        measure=MeasureKind.DISCORD_MBPDS,
        alpha=alpha,
        value=total + outcome.value,
        converged=outcome.converged,
        evaluations=outcome.evaluations,
        feasibility_residual=float(np.max(np.abs(v.conj().T @ v - np.eye(d_a)))),
        method=config.method,
        seed=config.seed,
        restart_index=outcome.restart_index,
        argmin={"n_outcomes": n, "rows": encode_matrix(v), "product_divergence": total},
    )


def rank_one_refinement_test(
    rho: DensityOperator, coarse: Povm, alpha: float, a: str = "A"
) -> float:
    """Objective of ``coarse`` minus that of its rank-one refinement, both read off one dilation.

    The general dilation outputs (E, XE, Y, X); the coarse POVM conditions on X alone while its
    refinement also conditions on the sub-outcome Y.
    """
    rest = _rest(rho, a)
    if coarse.rank_one:
        rows = coarse.rank_one_isometry()
        value = discord_objective(rho, rows, alpha, a)
        return value - value
    omega = measurement_dilation(coarse).apply(rho, a)
    coarse_value = renyi_cmi(omega, alpha, ("E", "XE", "Y"), rest, ("X",))
    refined_value = renyi_cmi(omega, alpha, ("E", "XE"), rest, ("X", "Y"))
    return coarse_value - refined_value
