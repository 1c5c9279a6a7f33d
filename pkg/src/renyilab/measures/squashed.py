"""Rényi squashed entanglement over bounded-dimension extensions.

Every extension of rho_AB arises as (id (x) Lambda_{R->E})(psi_ABR) for the
minimal purification psi_ABR. Lambda is taken from an isometry V: R -> E (x) E'
whose second factor is traced out, so extensions never leave the feasible set.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
import logging
import math

import numpy as np
import numpy.typing as npt

from renyilab.contracts.models import CcInvarianceReport, MeasureResult, OptimizerConfig
from renyilab.contracts.serialization import decode_matrix, encode_matrix
from renyilab.contracts.types import MeasureKind
from renyilab.errors import ShapeMismatch
from renyilab.info import renyi_cmi
from renyilab.info.entropies import group
from renyilab.linalg import Matrix, SubsystemShape, hermitian_eigh, hermitize
from renyilab.measures.optimizer import minimize_over_isometries, polar_retraction
from renyilab.states import (
    DensityOperator,
    Ensemble,
    flagged_state,
    purification_matrix,
    trace_distance,
)

logger = logging.getLogger(__name__)

EXTENSION_LABEL = "E"


def ancilla_dim(ext_dim: int, rank: int) -> int:
    """Dimension of the discarded factor E' so that E (x) E' can hold the purifying system."""
    return max(ext_dim, math.ceil(rank / ext_dim))


def extension_amplitudes(rho: DensityOperator, v: npt.ArrayLike) -> Matrix:
    """Psi = P V^T with P the purification matrix; rows index rho's space, columns E (x) E'."""
    p = purification_matrix(rho)
    m = np.asarray(v, dtype=np.complex128)
    if m.shape[1] != p.shape[1]:
        raise ShapeMismatch(f"isometry input {m.shape[1]} does not match rank {p.shape[1]}")
    return np.asarray(p @ m.T, dtype=np.complex128)


def extension_state(rho: DensityOperator, v: npt.ArrayLike, ext_dim: int) -> DensityOperator:
    """omega_ABE for the extension isometry ``v`` of shape (ext_dim * d_E', rank)."""
    if EXTENSION_LABEL in rho.labels:
        raise ShapeMismatch(f"label {EXTENSION_LABEL!r} already used by the input state")
    psi = extension_amplitudes(rho, v)
    d_anc = psi.shape[1] // ext_dim
    q = psi.reshape(rho.dim * ext_dim, d_anc)
    shape = rho.shape.concat(SubsystemShape(dims=(ext_dim,), labels=(EXTENSION_LABEL,)))
    return DensityOperator(matrix=hermitize(q @ q.conj().T), shape=shape)


def isometry_from_extension(rho: DensityOperator, psi: npt.ArrayLike) -> Matrix:
    """Invert :func:`extension_amplitudes`: V = (Lambda^-1 P^dagger Psi)^T, then retract."""
    p = purification_matrix(rho)
    lam = np.sum(np.abs(p) ** 2, axis=0)
    coeffs = (p.conj().T @ np.asarray(psi, dtype=np.complex128)) / lam[:, None]
    return polar_retraction(coeffs.T)


def pure_vector(state: DensityOperator) -> npt.NDArray[np.complex128]:
    w, v, _ = hermitian_eigh(state.matrix)
    if abs(float(w[-1]) - 1.0) > 1e-8:
        raise ShapeMismatch("flag extension needs an ensemble of pure states")
    return np.asarray(v[:, -1], dtype=np.complex128)


def flag_extension_isometry(
    rho: DensityOperator, ensemble: Ensemble, ext_dim: int, d_anc: int
) -> Matrix:
    """Extension whose E register holds a copy of the ensemble label.

    The purification is steered to sum_x sqrt(p_x) |psi_x> |x>_E |x>_E'; the
    ensemble must consist of pure states averaging to ``rho``.
    """
    n = len(ensemble)
    if n > min(ext_dim, d_anc):
        raise ShapeMismatch(f"{n} ensemble terms do not fit an extension of dimension {ext_dim}")
    psi = np.zeros((rho.dim, ext_dim * d_anc), dtype=np.complex128)
    for x, (px, state) in enumerate(zip(ensemble.probs, ensemble.states, strict=True)):
        psi[:, x * d_anc + x] = math.sqrt(px) * pure_vector(state)
    return isometry_from_extension(rho, psi)


def squashed_objective(
    rho: DensityOperator,
    v: npt.ArrayLike,
    alpha: float,
    ext_dim: int,
    a: str | Iterable[str] = "A",
    b: str | Iterable[str] = "B",
) -> float:
    """Half the Rényi CMI I_alpha(A;B|E) of the extension built from ``v``."""
    omega = extension_state(rho, v, ext_dim)
    return 0.5 * renyi_cmi(omega, alpha, a, b, EXTENSION_LABEL)


def squashed_entanglement(
    rho: DensityOperator,
    alpha: float,
    ext_dim: int | None = None,
    cfg: OptimizerConfig | None = None,
    *,
    a: str | Iterable[str] = "A",
    b: str | Iterable[str] = "B",
    warm_start: Ensemble | None = None,
    warm_isometries: Sequence[Matrix] = (),
    anc_dim: int | None = None,
) -> MeasureResult:
    """Upper bound on E^sq_alpha from extensions with |E| = ext_dim (default d_A * d_B)."""
    config = cfg or OptimizerConfig()
    ga, gb = group(a), group(b)
    state = rho.reduce(ga + gb)
    d_e = ext_dim or state.shape.dim(*ga) * state.shape.dim(*gb)
    rank = purification_matrix(state).shape[1]
    d_anc = anc_dim or ancilla_dim(d_e, rank)
    starts = list(warm_isometries)
    if warm_start is not None:
        starts.insert(0, flag_extension_isometry(state, warm_start, d_e, d_anc))

    def objective(v: Matrix) -> float:
        return squashed_objective(state, v, alpha, d_e, ga, gb)

    outcome = minimize_over_isometries(
        objective, d_e * d_anc, rank, config, starts, label=MeasureKind.SQUASHED.value
    )
    omega = extension_state(state, outcome.isometry, d_e)
    residual = trace_distance(omega.reduce(state.labels).matrix, state.matrix)
    return MeasureResult(
        measure=MeasureKind.SQUASHED,
        alpha=alpha,
        value=outcome.value,
        converged=outcome.converged,
        evaluations=outcome.evaluations,
        feasibility_residual=residual,
        method=config.method,
        seed=config.seed,
        restart_index=outcome.restart_index,
        argmin={
            "ext_dim": d_e,
            "anc_dim": d_anc,
            "rank": rank,
            "isometry": encode_matrix(outcome.isometry),
        },
    )


def cc_invariance_test(
    ensemble: Ensemble, alpha: float, cfg: OptimizerConfig | None = None, ext_dim: int | None = None
) -> CcInvarianceReport:
    """Squashed objectives of sum_x p_x |xx><xx|_{XA XB} (x) psi^x_AB for three flag groupings.

    Keys name the grouping as ``left;right``; XA and XB are the shared flag copies.
    """
    probs = ensemble.probs
    states = list(ensemble.states)
    flags = ("XA", "XB")
    rho = flagged_state(probs, states, flags)
    d_e = ext_dim or len(ensemble)
    groupings = {
        "AXA;B": (("XA", "A"), ("B",)),
        "AXA;BXB": (("XA", "A"), ("XB", "B")),
        "A;BXB": (("A",), ("XB", "B")),
    }
    values: dict[str, float] = {}
    for key, (ga, gb) in groupings.items():
        kept = rho.shape.keep(ga + gb).labels
        reduced = rho.reduce(kept)
        terms = []
        for x in range(len(probs)):
            onehot = np.zeros(len(probs))
            onehot[x] = 1.0
            terms.append(flagged_state(onehot, states, flags).reduce(kept))
        warm = Ensemble.of(probs, terms)
        result = squashed_entanglement(reduced, alpha, d_e, cfg, a=ga, b=gb, warm_start=warm)
        values[key] = result.value
    logger.info("measure.cc_invariance", extra={"extra": {"alpha": alpha, "values": values}})
    return CcInvarianceReport(alpha=alpha, values=values)


def convexity_gap(
    ensemble: Ensemble,
    alpha: float,
    cfg: OptimizerConfig | None = None,
    ext_dim: int | None = None,
) -> float:
    """sum_x p_x E^sq(rho_x) - E^sq(sum_x p_x rho_x); convexity predicts >= 0 up to optimizer slack.

    A pure ensemble also seeds the mixture's optimizer with its flag extension.
    """
    parts = [squashed_entanglement(s, alpha, ext_dim, cfg).value for s in ensemble.states]
    mixed_state = ensemble.average()
    warm = ensemble if all(s.is_pure(1e-8) for s in ensemble.states) else None
    d_e = ext_dim or mixed_state.shape.dim("A") * mixed_state.shape.dim("B")
    if warm is not None and len(warm) > d_e:
        warm = None
    mixed = squashed_entanglement(mixed_state, alpha, d_e, cfg, warm_start=warm).value
    return float(np.dot(ensemble.probs, parts)) - mixed


def _product_extension(
    rho1: DensityOperator,
    v1: Matrix,
    e1: int,
    rho2: DensityOperator,
    v2: Matrix,
    e2: int,
) -> Matrix:
    """Amplitudes of the product of two extensions laid out as (AB1 AB2) x (E1 E2 E1' E2')."""
    psi1 = extension_amplitudes(rho1, v1)
    psi2 = extension_amplitudes(rho2, v2)
    n1, n2 = psi1.shape[1] // e1, psi2.shape[1] // e2
    t = np.einsum(
        "iab,jcd->ijacbd", psi1.reshape(rho1.dim, e1, n1), psi2.reshape(rho2.dim, e2, n2)
    )
    return np.asarray(t.reshape(rho1.dim * rho2.dim, e1 * e2 * n1 * n2), dtype=np.complex128)


def subadditivity_gap(
    sigma: DensityOperator,
    tau: DensityOperator,
    alpha: float,
    cfg: OptimizerConfig | None = None,
    ext_dim: int | None = None,
) -> float:
    """E^sq(sigma) + E^sq(tau) - E^sq(sigma (x) tau); subadditivity predicts >= 0 up to slack.

    The joint value is optimized over extensions of sigma (x) tau starting from the product of
    the two optimal extensions, and never exceeds the value at that product.
    """
    first = squashed_entanglement(sigma, alpha, ext_dim, cfg)
    second = squashed_entanglement(tau, alpha, ext_dim, cfg)
    s = sigma.relabel({"A": "A1", "B": "B1"})
    t = tau.relabel({"A": "A2", "B": "B2"})
    e1, e2 = first.argmin["ext_dim"], second.argmin["ext_dim"]
    d_anc = first.argmin["anc_dim"] * second.argmin["anc_dim"]
    product = s.tensor(t)
    a, b = ("A1", "A2"), ("B1", "B2")
    psi = _product_extension(s, optimal_isometry(first), e1, t, optimal_isometry(second), e2)
    v = isometry_from_extension(product, psi)
    at_product = squashed_objective(product, v, alpha, e1 * e2, a, b)
    joint = squashed_entanglement(
        product, alpha, e1 * e2, cfg, a=a, b=b, warm_isometries=[v], anc_dim=d_anc
    )
    logger.info(
        "measure.subadditivity",
        extra={"extra": {"alpha": alpha, "at_product": at_product, "joint": joint.value}},
    )
    return first.value + second.value - min(at_product, joint.value)


def optimal_isometry(result: MeasureResult) -> Matrix:
    """Extension isometry recorded in a squashed-entanglement result."""
    return decode_matrix(result.argmin["isometry"])
