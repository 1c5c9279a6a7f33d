"""Relative-entropy differences D(rho||sigma) - D(N(rho)||N(sigma)) and their Rényi generalizations."""

from __future__ import annotations

from collections.abc import Sequence
import logging
import math

import numpy as np

from renyilab.contracts.models import LieTrotterRow, SlopeCheck
from renyilab.info import RenyiOrder, spectrum, vn_relative_entropy
from renyilab.linalg import (
    Matrix,
    hermitize,
    matrix_exp,
    matrix_log,
    matrix_power,
    real_trace,
    sandwich,
)
from renyilab.reldiff.instance import RelDiffInstance

logger = logging.getLogger(__name__)

SLOPE_MIN_VARIANCE = 1e-6
DEFAULT_P_GRID = (1e-2, 1e-3, 1e-4)


def delta_vn(inst: RelDiffInstance) -> float:
    before = vn_relative_entropy(inst.rho.matrix, inst.sigma.matrix)
    return before - vn_relative_entropy(inst.n_rho, inst.n_sigma)


def _pulled_back(inst: RelDiffInstance, outer: float, inner: float) -> Matrix:
    """N^dagger(N(sigma)^outer N(rho)^inner N(sigma)^outer)."""
    core = sandwich(matrix_power(inst.n_sigma, outer), matrix_power(inst.n_rho, inner))
    return inst.channel.adjoint()(core)


def y_gamma_trace(inst: RelDiffInstance, gamma: float) -> float:
    """Tr{rho^(1+g) sigma^(-g/2) N^dagger(N(sigma)^(g/2) N(rho)^(-g) N(sigma)^(g/2)) sigma^(-g/2)}."""
    alpha = 1.0 + gamma
    pulled = _pulled_back(inst, (alpha - 1.0) / 2.0, 1.0 - alpha)
    lifted = sandwich(matrix_power(inst.sigma.matrix, (1.0 - alpha) / 2.0), pulled)
    return real_trace(matrix_power(inst.rho.matrix, alpha) @ lifted)


def delta_alpha(inst: RelDiffInstance, alpha: float) -> float:
    """(1/(alpha-1)) log Tr{rho^alpha sigma^((1-alpha)/2) N^dagger(N(sigma)^((alpha-1)/2) N(rho)^(1-alpha) N(sigma)^((alpha-1)/2)) sigma^((1-alpha)/2)}."""
    if RenyiOrder.parse(alpha).is_von_neumann:
        return delta_vn(inst)
    return math.log(y_gamma_trace(inst, alpha - 1.0)) / (alpha - 1.0)


def delta_tilde_alpha(inst: RelDiffInstance, alpha: float) -> float:
    """(alpha/(alpha-1)) log ||rho^1/2 sigma^p N^dagger(N(sigma)^-p N(rho)^2p N(sigma)^-p) sigma^p rho^1/2||_alpha, p = (1-alpha)/2alpha."""
    if RenyiOrder.parse(alpha).is_von_neumann:
        return delta_vn(inst)
    p = (1.0 - alpha) / (2.0 * alpha)
    inner = sandwich(matrix_power(inst.sigma.matrix, p), _pulled_back(inst, -p, 2.0 * p))
    w = sandwich(matrix_power(inst.rho.matrix, 0.5), inner)
    return math.log(float(np.sum(spectrum(w) ** alpha))) / (alpha - 1.0)


def delta_alpha_monotonicity_margin(
    inst: RelDiffInstance, alpha: float, beta: float, *, sandwiched: bool = False
) -> float:
    """Delta_beta - Delta_alpha; monotonicity in the order predicts >= 0 for alpha <= beta."""
    fn = delta_tilde_alpha if sandwiched else delta_alpha
    return fn(inst, beta) - fn(inst, alpha)


def lie_trotter_target(inst: RelDiffInstance) -> Matrix:
    """exp{log sigma + N^dagger(log N(rho) - log N(sigma))}."""
    pulled = inst.channel.adjoint()(matrix_log(inst.n_rho) - matrix_log(inst.n_sigma))
    return matrix_exp(hermitize(matrix_log(inst.sigma.matrix) + pulled))


def lie_trotter_limit_check(
    inst: RelDiffInstance, p_grid: Sequence[float] = DEFAULT_P_GRID
) -> list[LieTrotterRow]:
    """Frobenius distance of [sigma^p/2 N^dagger(N(sigma)^-p/2 N(rho)^p N(sigma)^-p/2) sigma^p/2]^(1/p) to the limit."""
    target = lie_trotter_target(inst)
    rows = []
    for p in p_grid:
        m = sandwich(matrix_power(inst.sigma.matrix, p / 2.0), _pulled_back(inst, -p / 2.0, p))
        approx = matrix_power(m, 1.0 / p)
        rows.append(LieTrotterRow(p=p, distance=float(np.linalg.norm(approx - target))))
    return rows


def variance_v(inst: RelDiffInstance) -> float:
    """Relative-entropy-difference variance.

    Tr rho (L - Delta)^2 + Tr N(rho) K^2 - Tr rho (N^dagger K)^2 with K = log N(rho) - log N(sigma)
    and L = log rho - log sigma - N^dagger K. The last two terms are non-negative by Kadison-Schwarz.
    """
    rho = inst.rho.matrix
    k = matrix_log(inst.n_rho) - matrix_log(inst.n_sigma)
    pulled = inst.channel.adjoint()(k)
    delta = delta_vn(inst)
    shifted = (
        matrix_log(rho) - matrix_log(inst.sigma.matrix) - pulled - delta * np.eye(rho.shape[0])
    )
    first = real_trace(rho @ shifted @ shifted)
    second = real_trace(inst.n_rho @ k @ k)
    third = real_trace(rho @ pulled @ pulled)
    return first + second - third


def alpha_slope_check(
    inst: RelDiffInstance, h: float = 1e-4, *, sandwiched: bool = False
) -> SlopeCheck:
    """Central difference of Delta at alpha = 1 against V/2; skipped when V is below 1e-6."""
    fn = delta_tilde_alpha if sandwiched else delta_alpha
    v = variance_v(inst)
    slope = (fn(inst, 1.0 + h) - fn(inst, 1.0 - h)) / (2.0 * h)
    half = v / 2.0
    if v < SLOPE_MIN_VARIANCE:
        logger.info("reldiff.slope.skipped", extra={"extra": {"variance": v, "slope": slope}})
        return SlopeCheck(slope=slope, half_variance=half, relative_error=0.0, skipped=True)
    return SlopeCheck(slope=slope, half_variance=half, relative_error=abs(slope - half) / half)
