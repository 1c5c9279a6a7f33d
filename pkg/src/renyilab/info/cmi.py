"""Conditional mutual informations: von Neumann, Sibson closed form, Petz form, sandwiched."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
import math

import numpy as np
import numpy.typing as npt
from scipy import optimize

from renyilab.errors import ShapeMismatch
from renyilab.info.entropies import group, renyi_relative_entropy, spectrum, vn_entropy
from renyilab.info.order import RenyiOrder
from renyilab.linalg import (
    Matrix,
    alpha_norm,
    embed,
    matrix_power,
    partial_trace,
    real_trace,
    sandwich,
)
from renyilab.states import DensityOperator, make_rng

Labels = str | Iterable[str]


def _prepare(
    rho: DensityOperator, a: Labels, b: Labels, e: Labels
) -> tuple[DensityOperator, tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
    ga, gb, ge = group(a), group(b), group(e)
    every = ga + gb + ge
    if len(set(every)) != len(every):
        raise ShapeMismatch(f"label groups overlap: {ga} {gb} {ge}")
    state = rho.reduce(every)
    keep = state.shape.keep
    return state, keep(ga).labels, keep(gb).labels, keep(ge).labels


def _lift(state: DensityOperator, labels: Sequence[str], power: float) -> Matrix:
    """Marginal on ``labels`` raised to ``power`` and embedded into the state's layout."""
    if not labels:
        return np.eye(state.dim, dtype=np.complex128)
    ordered = state.shape.keep(labels).labels
    return embed(matrix_power(state.marginal(ordered), power), state.shape, ordered)


def vn_cmi(rho: DensityOperator, a: Labels = "A", b: Labels = "B", e: Labels = "E") -> float:
    """H(AE) + H(BE) - H(E) - H(ABE)."""
    state, ga, gb, ge = _prepare(rho, a, b, e)
    h_e = vn_entropy(state.marginal(ge)) if ge else 0.0
    return (
        vn_entropy(state.marginal(ga + ge))
        + vn_entropy(state.marginal(gb + ge))
        - h_e
        - vn_entropy(state.matrix)
    )


def renyi_cmi(
    rho: DensityOperator, alpha: float, a: Labels = "A", b: Labels = "B", e: Labels = "E"
) -> float:
    """Sibson closed form of I_alpha(A;B|E).

    (alpha/(alpha-1)) log Tr{(rho_E^((alpha-1)/2) Tr_A{rho_AE^((1-alpha)/2) rho_ABE^alpha
    rho_AE^((1-alpha)/2)} rho_E^((alpha-1)/2))^(1/alpha)}. Labels outside A, B, E are traced out
    first; an empty E gives the Rényi mutual information.
    """
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        return vn_cmi(rho, a, b, e)
    state, ga, gb, ge = _prepare(rho, a, b, e)
    inner = sandwich(_lift(state, ga + ge, (1.0 - alpha) / 2.0), matrix_power(state.matrix, alpha))
    reduced = partial_trace(inner, state.shape, gb + ge)
    be_shape = state.shape.keep(gb + ge)
    if ge:
        power = matrix_power(state.marginal(ge), (alpha - 1.0) / 2.0)
        side = embed(power, be_shape, be_shape.keep(ge).labels)
        reduced = sandwich(side, reduced)
    total = float(np.sum(spectrum(reduced) ** (1.0 / alpha)))
    return alpha / (alpha - 1.0) * math.log(total)


def renyi_cmi_petz(
    rho: DensityOperator, alpha: float, a: Labels = "A", b: Labels = "B", c: Labels = "C"
) -> float:
    """Rényi CMI with the reference fixed to rho_BC.

    (1/(alpha-1)) log Tr{rho_ABC^alpha rho_AC^((1-alpha)/2) rho_C^((alpha-1)/2) rho_BC^(1-alpha)
    rho_C^((alpha-1)/2) rho_AC^((1-alpha)/2)}; never below :func:`renyi_cmi`.
    """
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        return vn_cmi(rho, a, b, c)
    state, ga, gb, gc = _prepare(rho, a, b, c)
    g = _lift(state, ga + gc, (1.0 - alpha) / 2.0) @ _lift(state, gc, (alpha - 1.0) / 2.0)
    reference = sandwich(g, _lift(state, gb + gc, 1.0 - alpha))
    q = real_trace(matrix_power(state.matrix, alpha) @ reference)
    return math.log(q) / (alpha - 1.0)


def sandwiched_cmi(
    rho: DensityOperator, alpha: float, a: Labels = "A", b: Labels = "B", c: Labels = "C"
) -> float:
    """(1/(alpha-1)) log ||rho_ABC^1/2 rho_AC^((1-alpha)/2alpha) rho_C^((alpha-1)/2alpha) rho_BC^((1-alpha)/2alpha)||_2alpha^2alpha."""
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        return vn_cmi(rho, a, b, c)
    state, ga, gb, gc = _prepare(rho, a, b, c)
    p = (1.0 - alpha) / (2.0 * alpha)
    product = (
        matrix_power(state.matrix, 0.5)
        @ _lift(state, ga + gc, p)
        @ _lift(state, gc, -p)
        @ _lift(state, gb + gc, p)
    )
    norm = alpha_norm(product, 2.0 * alpha)
    return 2.0 * alpha * math.log(norm) / (alpha - 1.0)


def classical_conditioning_value(
    probs: npt.ArrayLike, values: npt.ArrayLike, alpha: float
) -> float:
    """(alpha/(alpha-1)) log sum_x p(x) exp(((alpha-1)/alpha) I_x): the CMI conditioned on an extra flag."""
    p = np.asarray(probs, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if RenyiOrder.parse(alpha).is_von_neumann:
        return float(np.dot(p, v))
    k = (alpha - 1.0) / alpha
    return float(math.log(np.dot(p, np.exp(k * v))) / k)


def _density_from_params(x: npt.NDArray[np.float64], d: int) -> Matrix:
    g = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
    s = g @ g.conj().T
    return s / real_trace(s)


def renyi_cmi_optimized_check(
    rho: DensityOperator,
    alpha: float,
    a: Labels = "A",
    b: Labels = "B",
    e: Labels = "E",
    *,
    restarts: int = 3,
    seed: int = 0,
    max_iters: int = 2000,
) -> float:
    """Minimize D_alpha(rho_ABE || (G sigma_BE^(1-alpha) G^dagger)^(1/(1-alpha))) over sigma_BE numerically.

    G = rho_AE^((1-alpha)/2) rho_E^((alpha-1)/2). Used only to cross-check :func:`renyi_cmi`;
    sigma_BE = G0 G0^dagger / Tr with unconstrained complex G0, starting at rho_BE and at
    random points.
    """
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        raise ValueError("the optimized form is defined for alpha != 1")
    state, ga, gb, ge = _prepare(rho, a, b, e)
    shape = state.shape
    be = shape.keep(gb + ge)
    g = _lift(state, ga + ge, (1.0 - alpha) / 2.0) @ _lift(state, ge, (alpha - 1.0) / 2.0)
    d = be.total

    def objective(x: npt.NDArray[np.float64]) -> float:
        sigma = _density_from_params(x, d)
        inner = sandwich(g, embed(matrix_power(sigma, 1.0 - alpha), shape, be.labels))
        reference = matrix_power(inner, 1.0 / (1.0 - alpha))
        return renyi_relative_entropy(state.matrix, reference, alpha)

    root = matrix_power(state.marginal(be.labels), 0.5)
    starts = [np.concatenate([root.real.reshape(-1), root.imag.reshape(-1)])]
    rng = make_rng(seed, 0)
    for _ in range(max(0, restarts - 1)):
        starts.append(rng.standard_normal(2 * d * d))
    options = {"gtol": 1e-12, "maxiter": max_iters}
    best = math.inf
    for x0 in starts:
        result = optimize.minimize(objective, x0, method="BFGS", options=options)
        # restart from the BFGS point with a fresh Hessian estimate
        polished = optimize.minimize(objective, result.x, method="BFGS", options=options)
        best = min(best, float(result.fun), float(polished.fun), objective(x0))
    return best

