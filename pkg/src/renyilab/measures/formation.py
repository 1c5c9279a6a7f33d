"""Rényi entanglement of formation via ensemble steering of the purification."""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from renyilab.contracts.models import MeasureResult, OptimizerConfig
from renyilab.contracts.serialization import encode_matrix
from renyilab.contracts.types import MeasureKind
from renyilab.errors import InvalidOrder, ShapeMismatch
from renyilab.info import RenyiOrder
from renyilab.linalg import Matrix
from renyilab.measures.optimizer import minimize_over_isometries
from renyilab.measures.squashed import (
    extension_amplitudes,
    isometry_from_extension,
    pure_vector,
    squashed_entanglement,
)
from renyilab.states import DensityOperator, Ensemble, purification_matrix

PROB_FLOOR = 1e-14


def _decomposition(
    rho: DensityOperator, v: npt.ArrayLike
) -> tuple[npt.NDArray[np.float64], Matrix]:
    """Weights p_x and unnormalized columns sqrt(p_x) psi_x of Psi = P V^T."""
    psi = extension_amplitudes(rho, v)
    probs = np.sum(np.abs(psi) ** 2, axis=0)
    return probs, psi


def eof_objective(rho: DensityOperator, v: npt.ArrayLike, alpha: float, a: str = "A") -> float:
    """(alpha/(1-alpha)) log sum_x p_x (Tr (psi_A^x)^alpha)^(1/alpha) for the decomposition steered by ``v``."""
    d_a = rho.shape.dim(a)
    rest = rho.dim // d_a
    probs, psi = _decomposition(rho, v)
    order = RenyiOrder.parse(alpha)
    total = 0.0
    for x in np.flatnonzero(probs > PROB_FLOOR):
        s = np.linalg.svd(psi[:, x].reshape(d_a, rest), compute_uv=False)
        lam = s**2 / probs[x]
        lam = lam[lam > PROB_FLOOR]
        if order.is_von_neumann:
            total += float(probs[x] * -np.sum(lam * np.log(lam)))
        else:
            total += float(probs[x] * np.sum(lam**alpha) ** (1.0 / alpha))
    if order.is_von_neumann:
        return total
    return alpha / (1.0 - alpha) * math.log(total)


def decomposition_isometry(rho: DensityOperator, ensemble: Ensemble, n_terms: int) -> Matrix:
    """Steering isometry reproducing a pure-state decomposition, padded with empty terms."""
    if len(ensemble) > n_terms:
        raise ShapeMismatch(
            f"decomposition has {len(ensemble)} terms but only {n_terms} are allowed"
        )
    psi = np.zeros((rho.dim, n_terms), dtype=np.complex128)
    for x, (px, state) in enumerate(zip(ensemble.probs, ensemble.states, strict=True)):
        psi[:, x] = math.sqrt(px) * pure_vector(state)
    return isometry_from_extension(rho, psi)


def eof_renyi(
    rho: DensityOperator,
    alpha: float,
    n_terms: int | None = None,
    cfg: OptimizerConfig | None = None,
    *,
    warm_start: Ensemble | None = None,
    a: str = "A",
) -> MeasureResult:
    """Minimum of :func:`eof_objective` over decompositions with at most ``n_terms`` terms (default rank^2)."""
    config = cfg or OptimizerConfig()
    rank = purification_matrix(rho).shape[1]
    n = n_terms or rank * rank
    if n < rank:
        raise ShapeMismatch(f"{n} terms cannot decompose a rank-{rank} state")
    starts = [] if warm_start is None else [decomposition_isometry(rho, warm_start, n)]

    def objective(v: Matrix) -> float:
        return eof_objective(rho, v, alpha, a)

    outcome = minimize_over_isometries(
        objective, n, rank, config, starts, label=MeasureKind.EOF.value
    )
    probs, psi = _decomposition(rho, outcome.isometry)
    average = psi @ psi.conj().T
    residual = float(np.sum(np.abs(np.linalg.eigvalsh(average - rho.matrix))))
    return MeasureResult(
        measure=MeasureKind.EOF,
        alpha=alpha,
        value=outcome.value,
        converged=outcome.converged,
        evaluations=outcome.evaluations,
        feasibility_residual=residual,
        method=config.method,
        seed=config.seed,
        restart_index=outcome.restart_index,
        argmin={
            "n_terms": n,
            "probs": [float(p) for p in probs],
            "isometry": encode_matrix(outcome.isometry),
        },
    )


def eof_bound_check(
    rho: DensityOperator,
    alpha: float,
    cfg: OptimizerConfig | None = None,
    *,
    ext_dim: int | None = None,
    n_terms: int | None = None,
) -> float:
    """E^F_{(2-alpha)/alpha} - E^sq_alpha, expected non-negative up to optimizer slack."""
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann or alpha >= 2.0:
        raise InvalidOrder(
            f"the formation bound is stated for alpha in (0,1) and (1,2), got {alpha}"
        )
    formation = eof_renyi(rho, (2.0 - alpha) / alpha, n_terms, cfg)
    squashed = squashed_entanglement(rho, alpha, ext_dim, cfg)
    return formation.value - squashed.value
