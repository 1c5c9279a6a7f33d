"""Density operators, pure states, ensembles and their basic functionals."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from renyilab.errors import ShapeMismatch
from renyilab.linalg import (
    HermitianOperator,
    Matrix,
    SubsystemShape,
    alpha_norm,
    hermitian_eigh,
    hermitize,
    kron_all,
    matrix_power,
    partial_trace,
    permute,
    tensor,
)

TRACE_TOL = 1e-10
NORM_TOL = 1e-12


def _labels(group: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(group, str):
        return (group,)
    return tuple(group)


@dataclass(frozen=True, slots=True)
class DensityOperator:
    """PSD unit-trace matrix laid out according to ``shape``."""

    matrix: Matrix
    shape: SubsystemShape

    def __post_init__(self) -> None:
        self.shape.check(self.matrix)

    @classmethod
    def from_matrix(
        cls, matrix: npt.ArrayLike, shape: SubsystemShape, *, validate: bool = True
    ) -> DensityOperator:
        m = np.asarray(matrix, dtype=np.complex128)
        if validate:
            m = HermitianOperator.from_matrix(m).entries
            hermitian_eigh(m)
            trace = float(np.real(np.trace(m)))
            if abs(trace - 1.0) > TRACE_TOL:
                raise ShapeMismatch(f"density operator has trace {trace:.12f}")
        else:
            m = hermitize(m)
        return cls(matrix=m, shape=shape)

    @classmethod
    def single(cls, matrix: npt.ArrayLike, label: str = "A") -> DensityOperator:
        m = np.asarray(matrix, dtype=np.complex128)
        return cls.from_matrix(m, SubsystemShape(dims=(m.shape[0],), labels=(label,)))

    @property
    def op(self) -> HermitianOperator:
        return HermitianOperator.from_matrix(self.matrix)

    @property
    def dim(self) -> int:
        return self.shape.total

    @property
    def labels(self) -> tuple[str, ...]:
        return self.shape.labels

    def reduce(self, labels: str | Iterable[str]) -> DensityOperator:
        keep = _labels(labels)
        kept = self.shape.keep(keep)
        return DensityOperator(matrix=partial_trace(self.matrix, self.shape, keep), shape=kept)

    def marginal(self, labels: str | Iterable[str]) -> Matrix:
        keep = _labels(labels)
        if not keep:
            return np.ones((1, 1), dtype=np.complex128)
        return partial_trace(self.matrix, self.shape, keep)

    def reorder(self, labels: Sequence[str]) -> DensityOperator:
        matrix, shape = permute(self.matrix, self.shape, labels)
        return DensityOperator(matrix=matrix, shape=shape)

    def relabel(self, mapping: dict[str, str]) -> DensityOperator:
        return DensityOperator(matrix=self.matrix, shape=self.shape.relabel(mapping))

    def tensor(self, other: DensityOperator) -> DensityOperator:
        return DensityOperator(
            matrix=tensor(self.matrix, other.matrix), shape=self.shape.concat(other.shape)
        )

    def rank(self, *, cutoff: float | None = None) -> int:
        _, _, mask = hermitian_eigh(self.matrix, cutoff=cutoff)
        return int(np.count_nonzero(mask))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(float(np.real(np.trace(self.matrix @ self.matrix))) - 1.0) <= tol


@dataclass(frozen=True, slots=True)
class PureState:
    amplitudes: npt.NDArray[np.complex128]
    shape: SubsystemShape

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (self.shape.total,):
            raise ShapeMismatch(
                f"amplitude vector {self.amplitudes.shape} does not match {self.shape.dims}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL * max(1, self.shape.total):
            raise ShapeMismatch(f"pure state has norm {norm:.15f}")

    @classmethod
    def normalized(cls, amplitudes: npt.ArrayLike, shape: SubsystemShape) -> PureState:
        v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        return cls(amplitudes=v / np.linalg.norm(v), shape=shape)

    def density(self) -> DensityOperator:
        v = self.amplitudes
        return DensityOperator(matrix=np.outer(v, v.conj()), shape=self.shape)

    def bipartite_matrix(self, left: Sequence[str]) -> Matrix:
        """Amplitudes reshaped to (dim(left), dim(rest)) after moving ``left`` to the front."""
        rest = [lab for lab in self.shape.labels if lab not in left]
        order = list(left) + rest
        axes = [self.shape.index(lab) for lab in order]
        t = self.amplitudes.reshape(self.shape.dims).transpose(axes)
        return np.asarray(t.reshape(self.shape.dim(*left), -1), dtype=np.complex128)


@dataclass(frozen=True, slots=True)
class Ensemble:
    probs: npt.NDArray[np.float64]
    states: tuple[DensityOperator, ...]

    def __post_init__(self) -> None:
        if len(self.probs) != len(self.states) or not self.states:
            raise ShapeMismatch("ensemble needs one probability per state")
        if np.any(self.probs < 0) or abs(float(np.sum(self.probs)) - 1.0) > TRACE_TOL:
            raise ShapeMismatch(f"ensemble probabilities {self.probs} are not a distribution")
        first = self.states[0].shape
        if any(state.shape != first for state in self.states):
            raise ShapeMismatch("ensemble states must share one shape")

    @classmethod
    def of(cls, probs: npt.ArrayLike, states: Iterable[DensityOperator]) -> Ensemble:
        return cls(probs=np.asarray(probs, dtype=np.float64), states=tuple(states))

    @property
    def shape(self) -> SubsystemShape:
        return self.states[0].shape

    def __len__(self) -> int:
        return len(self.states)

    def average(self) -> DensityOperator:
        weighted = (p * s.matrix for p, s in zip(self.probs, self.states, strict=True))
        total = sum(weighted, start=np.zeros_like(self.states[0].matrix))
        return DensityOperator(matrix=hermitize(total), shape=self.shape)


def schmidt(psi: PureState) -> tuple[npt.NDArray[np.float64], Matrix, Matrix]:
    """Schmidt coefficients (descending) with basis vectors as columns of the two factors."""
    if len(psi.shape.labels) != 2:
        raise ShapeMismatch(f"schmidt needs a bipartite state, got labels {psi.shape.labels}")
    m = psi.amplitudes.reshape(psi.shape.dims)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    keep = s > NORM_TOL
    return s[keep], u[:, keep], vh[keep].T


def purify(rho: DensityOperator, label: str = "R", *, cutoff: float | None = None) -> PureState:
    """Minimal purification sum_i sqrt(l_i)|e_i>|i>_R; R is appended last."""
    if label in rho.labels:
        raise ShapeMismatch(f"purifying label {label!r} already in use")
    w, v, mask = hermitian_eigh(rho.matrix, cutoff=cutoff)
    lam = w[mask][::-1]
    vecs = v[:, mask][:, ::-1]
    amplitudes = (vecs * np.sqrt(lam)).reshape(-1)
    shape = rho.shape.concat(SubsystemShape(dims=(len(lam),), labels=(label,)))
    return PureState.normalized(amplitudes, shape)


def purification_matrix(rho: DensityOperator, *, cutoff: float | None = None) -> Matrix:
    """Columns sqrt(l_i)|e_i>; row space is the system, columns index the purifying system."""
    w, v, mask = hermitian_eigh(rho.matrix, cutoff=cutoff)
    return np.asarray(v[:, mask][:, ::-1] * np.sqrt(w[mask][::-1]), dtype=np.complex128)


def fidelity(rho: DensityOperator | Matrix, sigma: DensityOperator | Matrix) -> float:
    """Squared fidelity (Tr|sqrt(rho) sqrt(sigma)|)^2, clipped to [0, 1]."""
    r = rho.matrix if isinstance(rho, DensityOperator) else rho
    s = sigma.matrix if isinstance(sigma, DensityOperator) else sigma
    if r.shape != s.shape:
        raise ShapeMismatch(f"fidelity of shapes {r.shape} and {s.shape}")
    value = alpha_norm(matrix_power(r, 0.5) @ matrix_power(s, 0.5), 1.0) ** 2
    return float(min(max(value, 0.0), 1.0))


def trace_distance(rho: DensityOperator | Matrix, sigma: DensityOperator | Matrix) -> float:
    """Unnormalized trace distance ||rho - sigma||_1."""
    r = rho.matrix if isinstance(rho, DensityOperator) else rho
    s = sigma.matrix if isinstance(sigma, DensityOperator) else sigma
    if r.shape != s.shape:
        raise ShapeMismatch(f"trace distance of shapes {r.shape} and {s.shape}")
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(r - s)))))


def basis_state(d: int, index: int) -> npt.NDArray[np.complex128]:
    v = np.zeros(d, dtype=np.complex128)
    v[index] = 1.0
    return v


def maximally_entangled(d: int, labels: tuple[str, str] = ("A", "B")) -> PureState:
    amplitudes = np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)
    return PureState(amplitudes=amplitudes, shape=SubsystemShape(dims=(d, d), labels=labels))


def flagged_state(
    probs: npt.ArrayLike,
    states: Sequence[DensityOperator],
    flag_labels: Sequence[str] = ("X",),
    flags_dim: int | None = None,
) -> DensityOperator:
    """sum_x p(x) |x><x|^(copies) (x) rho^x with the flag copies listed first."""
    p = np.asarray(probs, dtype=np.float64)
    d = flags_dim or len(p)
    if len(p) > d or len(p) != len(states):
        raise ShapeMismatch("flag register too small for the number of terms")
    inner = states[0].shape
    copies = len(flag_labels)
    total = np.zeros((d**copies * inner.total,) * 2, dtype=np.complex128)
    for x, (px, state) in enumerate(zip(p, states, strict=True)):
        flag = np.outer(basis_state(d, x), basis_state(d, x))
        total += px * kron_all(*([flag] * copies), state.matrix)
    shape = SubsystemShape(dims=(d,) * copies, labels=tuple(flag_labels)).concat(inner)
    return DensityOperator(matrix=hermitize(total), shape=shape)


def cq_state(
    probs: npt.ArrayLike,
    flags_dim: int,
    conditional_states: Sequence[DensityOperator],
    flag_label: str = "X",
) -> DensityOperator:
    return flagged_state(probs, conditional_states, (flag_label,), flags_dim)
