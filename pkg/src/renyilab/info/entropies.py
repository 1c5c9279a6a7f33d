"""Entropies, relative entropies and the Sibson closed forms for two parties.

Logarithms are natural. Support violations return ``math.inf`` instead of raising.
"""

from __future__ import annotations

from collections.abc import Iterable
import math

import numpy as np
import numpy.typing as npt

from renyilab.info.order import RenyiOrder, is_von_neumann
from renyilab.linalg import (
    Matrix,
    embed,
    hermitian_eigh,
    matrix_log,
    matrix_power,
    partial_trace,
    real_trace,
    sandwich,
    support_projector,
)
from renyilab.states import DensityOperator

SUPPORT_TOL = 1e-9


def _matrix(x: DensityOperator | npt.ArrayLike) -> Matrix:
    if isinstance(x, DensityOperator):
        return x.matrix
    return np.asarray(x, dtype=np.complex128)


def group(labels: str | Iterable[str]) -> tuple[str, ...]:
    return (labels,) if isinstance(labels, str) else tuple(labels)


def spectrum(rho: DensityOperator | npt.ArrayLike) -> npt.NDArray[np.float64]:
    w, _, mask = hermitian_eigh(_matrix(rho))
    return w[mask]


def vn_entropy(rho: DensityOperator | npt.ArrayLike) -> float:
    lam = spectrum(rho)
    return float(-np.sum(lam * np.log(lam)))


def renyi_entropy(rho: DensityOperator | npt.ArrayLike, alpha: float) -> float:
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        return vn_entropy(rho)
    lam = spectrum(rho)
    return float(math.log(np.sum(lam**alpha)) / (1.0 - alpha))


def support_contained(rho: Matrix, sigma: Matrix) -> bool:
    """supp(rho) inside supp(sigma)."""
    outside = np.eye(sigma.shape[0]) - support_projector(sigma)
    return real_trace(outside @ rho) <= SUPPORT_TOL * max(real_trace(rho), 1.0)


def orthogonal_supports(rho: Matrix, sigma: Matrix) -> bool:
    return real_trace(support_projector(rho) @ support_projector(sigma)) <= SUPPORT_TOL


def vn_relative_entropy(
    rho: DensityOperator | npt.ArrayLike, sigma: DensityOperator | npt.ArrayLike
) -> float:
    r, s = _matrix(rho), _matrix(sigma)
    if not support_contained(r, s):
        return math.inf
    return real_trace(r @ (matrix_log(r) - matrix_log(s)))


def renyi_relative_entropy(
    rho: DensityOperator | npt.ArrayLike, sigma: DensityOperator | npt.ArrayLike, alpha: float
) -> float:
    """(1/(alpha-1)) log Tr{rho^alpha sigma^(1-alpha)}; alpha=0 gives the min-relative entropy form."""
    r, s = _matrix(rho), _matrix(sigma)
    if alpha != 0 and is_von_neumann(alpha):
        return vn_relative_entropy(r, s)
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    if alpha > 1 and not support_contained(r, s):
        return math.inf
    if alpha < 1 and orthogonal_supports(r, s):
        return math.inf
    q = real_trace(matrix_power(r, alpha) @ matrix_power(s, 1.0 - alpha))
    if q <= 0:
        return math.inf
    return math.log(q) / (alpha - 1.0)


def sandwiched_relative_entropy(
    rho: DensityOperator | npt.ArrayLike, sigma: DensityOperator | npt.ArrayLike, alpha: float
) -> float:
    """(1/(alpha-1)) log Tr{(sigma^((1-alpha)/2alpha) rho sigma^((1-alpha)/2alpha))^alpha}."""
    r, s = _matrix(rho), _matrix(sigma)
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        return vn_relative_entropy(r, s)
    if alpha > 1 and not support_contained(r, s):
        return math.inf
    if alpha < 1 and orthogonal_supports(r, s):
        return math.inf
    inner = sandwich(matrix_power(s, (1.0 - alpha) / (2.0 * alpha)), r)
    q = float(np.sum(spectrum(inner) ** alpha))
    if q <= 0:
        return math.inf
    return math.log(q) / (alpha - 1.0)


def vn_conditional_entropy(
    rho: DensityOperator, a: str | Iterable[str] = "A", b: str | Iterable[str] = "B"
) -> float:
    ga, gb = group(a), group(b)
    return vn_entropy(rho.marginal(ga + gb)) - vn_entropy(rho.marginal(gb))


def vn_mutual_info(
    rho: DensityOperator, a: str | Iterable[str] = "A", b: str | Iterable[str] = "B"
) -> float:
    ga, gb = group(a), group(b)
    joint = vn_entropy(rho.marginal(ga + gb))
    return vn_entropy(rho.marginal(ga)) + vn_entropy(rho.marginal(gb)) - joint


def renyi_conditional_entropy(
    rho: DensityOperator, alpha: float, a: str | Iterable[str] = "A", b: str | Iterable[str] = "B"
) -> float:
    """H_alpha(A|B) = (alpha/(1-alpha)) log Tr{(Tr_A rho_AB^alpha)^(1/alpha)}."""
    ga, gb = group(a), group(b)
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        return vn_conditional_entropy(rho, ga, gb)
    state = rho.reduce(ga + gb)
    reduced = partial_trace(matrix_power(state.matrix, alpha), state.shape, gb)
    return float(alpha / (1.0 - alpha) * math.log(np.sum(spectrum(reduced) ** (1.0 / alpha))))


def renyi_mutual_info(
    rho: DensityOperator, alpha: float, a: str | Iterable[str] = "A", b: str | Iterable[str] = "B"
) -> float:
    """I_alpha(A;B) = (alpha/(alpha-1)) log Tr{(Tr_A{rho_A^(1-alpha) rho_AB^alpha})^(1/alpha)}."""
    ga, gb = group(a), group(b)
    order = RenyiOrder.parse(alpha)
    if order.is_von_neumann:
        return vn_mutual_info(rho, ga, gb)
    state = rho.reduce(ga + gb)
    shape = state.shape
    power = matrix_power(state.marginal(ga), (1.0 - alpha) / 2.0)
    side = embed(power, shape, shape.keep(ga).labels)
    inner = sandwich(side, matrix_power(state.matrix, alpha))
    reduced = partial_trace(inner, shape, gb)
    return float(alpha / (alpha - 1.0) * math.log(np.sum(spectrum(reduced) ** (1.0 / alpha))))
