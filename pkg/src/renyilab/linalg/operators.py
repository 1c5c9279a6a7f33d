"""Functional calculus for Hermitian matrices under the generalized-inverse convention.

Every matrix function goes through :func:`hermitian_eigh`. Eigenvalues at or below
``cutoff * lambda_max`` count as zero: functions are applied on the support only, so
negative powers are generalized inverses and ``A**0`` is the support projector.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from renyilab.errors import NegativeEigenvalue, NonHermitianInput
from renyilab.settings import get_settings

Matrix: TypeAlias = npt.NDArray[np.complex128]
RealVector: TypeAlias = npt.NDArray[np.float64]

HERMITICITY_TOL = 1e-12


def _cutoff(cutoff: float | None) -> float:
    return get_settings().spectral_cutoff if cutoff is None else cutoff


def hermiticity_defect(a: npt.ArrayLike) -> float:
    m = np.asarray(a, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def _as_hermitian(a: npt.ArrayLike) -> Matrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {m.shape}")
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    defect = hermiticity_defect(m)
    if defect > HERMITICITY_TOL * (1.0 + scale):
        raise NonHermitianInput(f"hermiticity defect {defect:.3e} exceeds tolerance")
    return (m + m.conj().T) / 2


@dataclass(frozen=True, slots=True)
class HermitianOperator:
    """Validated Hermitian matrix; construction symmetrizes away rounding defects."""

    entries: Matrix
    hermiticity_defect: float

    @classmethod
    def from_matrix(cls, a: npt.ArrayLike) -> HermitianOperator:
        defect = hermiticity_defect(a)
        return cls(entries=_as_hermitian(a), hermiticity_defect=defect)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def power(self, p: float, *, cutoff: float | None = None) -> HermitianOperator:
        return HermitianOperator.from_matrix(matrix_power(self.entries, p, cutoff=cutoff))

    def log(self, *, cutoff: float | None = None) -> HermitianOperator:
        return HermitianOperator.from_matrix(matrix_log(self.entries, cutoff=cutoff))

    def exp(self) -> HermitianOperator:
        return HermitianOperator.from_matrix(matrix_exp(self.entries))

    def support(self, *, cutoff: float | None = None) -> HermitianOperator:
        return HermitianOperator.from_matrix(support_projector(self.entries, cutoff=cutoff))


def hermitian_eigh(
    a: npt.ArrayLike,
    *,
    cutoff: float | None = None,
    require_psd: bool = True,
) -> tuple[RealVector, Matrix, npt.NDArray[np.bool_]]:
    """Return eigenvalues, eigenvectors and the support mask of a Hermitian matrix.

    Raises NegativeEigenvalue when ``require_psd`` and an eigenvalue lies below
    ``-cutoff * lambda_max``.
    """
    h = _as_hermitian(a)
    tau = _cutoff(cutoff)
    w, v = np.linalg.eigh(h)
    lam_max = float(np.max(np.abs(w))) if w.size else 0.0
    threshold = tau * lam_max
    if require_psd and w.size and float(w[0]) < -threshold:
        raise NegativeEigenvalue(
            f"eigenvalue {float(w[0]):.3e} below -{tau:g} * lambda_max ({lam_max:.3e})"
        )
    mask = w > threshold
    return w, v, mask


def matrix_function(
    a: npt.ArrayLike,
    f: Callable[[RealVector], npt.ArrayLike],
    *,
    cutoff: float | None = None,
) -> Matrix:
    """Apply ``f`` to the strictly positive part of the spectrum of a PSD matrix."""
    w, v, mask = hermitian_eigh(a, cutoff=cutoff)
    vs = v[:, mask]
    values = np.asarray(f(w[mask]), dtype=np.float64)
    return (vs * values) @ vs.conj().T


def matrix_power(a: npt.ArrayLike, p: float, *, cutoff: float | None = None) -> Matrix:
    if p == 0:
        return support_projector(a, cutoff=cutoff)
    return matrix_function(a, lambda w: np.power(w, p), cutoff=cutoff)


def matrix_log(a: npt.ArrayLike, *, cutoff: float | None = None) -> Matrix:
    return matrix_function(a, np.log, cutoff=cutoff)


def matrix_exp(a: npt.ArrayLike) -> Matrix:
    """Exponential of any Hermitian matrix (no positivity requirement)."""
    w, v, _ = hermitian_eigh(a, require_psd=False)
    return (v * np.exp(w)) @ v.conj().T


def support_projector(a: npt.ArrayLike, *, cutoff: float | None = None) -> Matrix:
    _, v, mask = hermitian_eigh(a, cutoff=cutoff)
    vs = v[:, mask]
    return vs @ vs.conj().T


def is_psd(a: npt.ArrayLike, *, cutoff: float | None = None) -> bool:
    try:
        hermitian_eigh(a, cutoff=cutoff)
    except NegativeEigenvalue:
        return False
    return True


def alpha_norm(x: npt.ArrayLike, alpha: float) -> float:
    """Schatten alpha-norm (Tr|X|^alpha)^(1/alpha); a quasi-norm for alpha < 1."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    s = np.linalg.svd(np.asarray(x, dtype=np.complex128), compute_uv=False)
    return float(np.sum(np.power(s, alpha)) ** (1.0 / alpha))


def trace_norm(x: npt.ArrayLike) -> float:
    return alpha_norm(x, 1.0)


def hermitize(m: npt.ArrayLike) -> Matrix:
    """Hermitian part of a matrix that is Hermitian up to rounding."""
    a = np.asarray(m, dtype=np.complex128)
    return (a + a.conj().T) / 2


def sandwich(outer: npt.ArrayLike, inner: npt.ArrayLike) -> Matrix:
    """outer @ inner @ outer^dagger, symmetrized."""
    x = np.asarray(outer, dtype=np.complex128)
    return hermitize(x @ np.asarray(inner, dtype=np.complex128) @ x.conj().T)


def real_trace(m: npt.ArrayLike) -> float:
    return float(np.real(np.trace(np.asarray(m))))
