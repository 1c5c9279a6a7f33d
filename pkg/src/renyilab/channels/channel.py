"""Kraus-represented maps, isometries and channel constructions."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
import itertools

import numpy as np
import numpy.typing as npt

from renyilab.errors import ShapeMismatch
from renyilab.linalg import Matrix, SubsystemShape, hermitize, kron_all
from renyilab.states import DensityOperator, basis_state, random_unitary

TP_TOL = 1e-10


def _kraus_tuple(kraus: Iterable[npt.ArrayLike]) -> tuple[Matrix, ...]:
    ops = tuple(np.asarray(k, dtype=np.complex128) for k in kraus)
    if not ops:
        raise ShapeMismatch("a Kraus family needs at least one operator")
    first = ops[0].shape
    if any(k.shape != first or k.ndim != 2 for k in ops):
        raise ShapeMismatch("Kraus operators must share one (d_out, d_in) shape")
    return ops


@dataclass(frozen=True, slots=True)
class QuantumChannel:
    """Completely positive map sum_k K rho K^dagger.

    Trace preservation is checked by :meth:`validated`; adjoints and Petz maps on
    singular references are built unchecked.
    """

    kraus: tuple[Matrix, ...]

    @classmethod
    def from_kraus(cls, kraus: Iterable[npt.ArrayLike], *, check_tp: bool = True) -> QuantumChannel:
        channel = cls(kraus=_kraus_tuple(kraus))
        if check_tp:
            residual = channel.trace_preservation_residual()
            if residual > TP_TOL:
                raise ShapeMismatch(
                    f"Kraus family is not trace preserving (residual {residual:.3e})"
                )
        return channel

    @property
    def d_in(self) -> int:
        return int(self.kraus[0].shape[1])

    @property
    def d_out(self) -> int:
        return int(self.kraus[0].shape[0])

    def __call__(self, rho: npt.ArrayLike) -> Matrix:
        m = np.asarray(rho, dtype=np.complex128)
        if m.shape != (self.d_in, self.d_in):
            raise ShapeMismatch(f"channel input is {self.d_in}-dimensional, got {m.shape}")
        zero = np.zeros((self.d_out,) * 2, dtype=np.complex128)
        return hermitize(sum((k @ m @ k.conj().T for k in self.kraus), start=zero))

    def adjoint(self) -> QuantumChannel:
        """Heisenberg-picture map X -> sum_k K^dagger X K (unital when self is TP)."""
        return QuantumChannel(kraus=tuple(k.conj().T for k in self.kraus))

    def compose(self, other: QuantumChannel) -> QuantumChannel:
        """self after other."""
        return QuantumChannel(kraus=tuple(a @ b for a in self.kraus for b in other.kraus))

    def trace_preservation_residual(self) -> float:
        zero = np.zeros((self.d_in,) * 2, dtype=np.complex128)
        total = sum((k.conj().T @ k for k in self.kraus), start=zero)
        return float(np.max(np.abs(total - np.eye(self.d_in))))

    def unitality_residual(self) -> float:
        return float(np.max(np.abs(self(np.eye(self.d_in)) - np.eye(self.d_out))))

    def choi(self) -> Matrix:
        """Normalized Choi state (1/d_in) sum_ij |i><j| (x) N(|i><j|), input factor first."""
        d = self.d_in
        out = np.zeros((d * self.d_out,) * 2, dtype=np.complex128)
        zero = np.zeros((self.d_out,) * 2, dtype=np.complex128)
        for i, j in itertools.product(range(d), repeat=2):
            unit = np.outer(basis_state(d, i), basis_state(d, j))
            image = sum((k @ unit @ k.conj().T for k in self.kraus), start=zero)
            out += np.kron(unit, image)
        return out / d


@dataclass(frozen=True, slots=True)
class Isometry:
    matrix: Matrix

    @property
    def d_in(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def d_out(self) -> int:
        return int(self.matrix.shape[0])

    def residual(self) -> float:
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - np.eye(self.d_in))))

    def as_channel(self) -> QuantumChannel:
        return QuantumChannel(kraus=(self.matrix,))


def apply_local(
    kraus: Sequence[npt.ArrayLike],
    rho: DensityOperator,
    label: str,
    out_dims: Sequence[int] | None = None,
    out_labels: Sequence[str] | None = None,
) -> DensityOperator:
    """Apply sum_k K (.) K^dagger on factor ``label``; the output may split into several factors."""
    shape = rho.shape
    i = shape.index(label)
    n = len(shape.dims)
    ops = [np.asarray(k, dtype=np.complex128) for k in kraus]
    if ops[0].shape[1] != shape.dims[i]:
        raise ShapeMismatch(f"map input {ops[0].shape[1]} does not match {label}={shape.dims[i]}")
    d_out = ops[0].shape[0]
    t = rho.matrix.reshape(shape.dims + shape.dims)
    acc: npt.NDArray[np.complex128] | None = None
    for k in ops:
        u = np.moveaxis(np.tensordot(k, t, axes=([1], [i])), 0, i)
        u = np.moveaxis(np.tensordot(u, k.conj(), axes=([n + i], [1])), -1, n + i)
        acc = u if acc is None else acc + u
    assert acc is not None
    mid = shape.replace(label, (d_out,), (label,))
    matrix = hermitize(acc.reshape(mid.total, mid.total))
    dims = tuple(out_dims) if out_dims is not None else (d_out,)
    labels = tuple(out_labels) if out_labels is not None else (label,)
    if int(np.prod(dims)) != d_out:
        raise ShapeMismatch(f"output factors {dims} do not multiply to {d_out}")
    return DensityOperator(matrix=matrix, shape=shape.replace(label, dims, labels))


def apply(
    channel: QuantumChannel, rho: DensityOperator, target_label: str, out_label: str | None = None
) -> DensityOperator:
    """id (x) N on the factor ``target_label``."""
    return apply_local(channel.kraus, rho, target_label, out_labels=(out_label or target_label,))


def adjoint(channel: QuantumChannel) -> QuantumChannel:
    return channel.adjoint()


def stinespring(channel: QuantumChannel) -> Isometry:
    """V = sum_k K_k (x) |k>_E with output layout (B, E)."""
    stacked = np.stack(channel.kraus, axis=1)
    return Isometry(matrix=stacked.reshape(channel.d_out * len(channel.kraus), channel.d_in))


def channel_from_isometry(v: npt.ArrayLike, d_out: int) -> QuantumChannel:
    """Inverse of :func:`stinespring`: Tr_E of V (.) V^dagger with V laid out as (B, E)."""
    m = np.asarray(v, dtype=np.complex128)
    r = m.shape[0] // d_out
    if d_out * r != m.shape[0]:
        raise ShapeMismatch(f"isometry output {m.shape[0]} is not a multiple of {d_out}")
    t = m.reshape(d_out, r, m.shape[1])
    return QuantumChannel(kraus=tuple(t[:, k, :] for k in range(r)))


def random_channel(
    d_in: int, d_out: int, rng: np.random.Generator, d_env: int | None = None
) -> QuantumChannel:
    """First d_in columns of a Haar unitary on d_out * d_env, read as a Stinespring isometry."""
    env = d_env or d_in
    if d_out * env < d_in:
        raise ShapeMismatch(f"environment {env} too small for a {d_in}->{d_out} channel")
    v = random_unitary(d_out * env, rng)[:, :d_in]
    return channel_from_isometry(v, d_out)


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel(kraus=(np.eye(d, dtype=np.complex128),))


def unitary_channel(u: npt.ArrayLike) -> QuantumChannel:
    return QuantumChannel.from_kraus([u])


def depolarizing(d: int, p: float) -> QuantumChannel:
    """rho -> (1 - p) rho + p Tr(rho) I/d."""
    kraus: list[Matrix] = [np.sqrt(1 - p) * np.eye(d, dtype=np.complex128)] if p < 1 else []
    for i, j in itertools.product(range(d), repeat=2):
        kraus.append(np.sqrt(p / d) * np.outer(basis_state(d, i), basis_state(d, j)))
    return QuantumChannel.from_kraus(kraus)


def classical_channel(stochastic: npt.ArrayLike) -> QuantumChannel:
    """Channel applying the column-stochastic matrix P[y, x] to diagonal states and dephasing."""
    p = np.asarray(stochastic, dtype=np.float64)
    d_out, d_in = p.shape
    kraus = [
        np.sqrt(p[y, x]) * np.outer(basis_state(d_out, y), basis_state(d_in, x))
        for x in range(d_in)
        for y in range(d_out)
        if p[y, x] > 0
    ]
    return QuantumChannel.from_kraus(kraus)


def partial_trace_channel(shape: SubsystemShape, traced: Sequence[str]) -> QuantumChannel:
    """Tr_traced as a Kraus family <i|_traced (x) I_rest in the layout of ``shape``."""
    gone = set(traced)
    for label in gone:
        shape.index(label)
    ranges = [range(shape.dims[shape.index(lab)]) for lab in shape.labels if lab in gone]
    kraus = []
    for indices in itertools.product(*ranges):
        it = iter(indices)
        factors = []
        for d, lab in zip(shape.dims, shape.labels, strict=True):
            if lab in gone:
                factors.append(basis_state(d, next(it)).reshape(1, d))
            else:
                factors.append(np.eye(d, dtype=np.complex128))
        kraus.append(kron_all(*factors))
    return QuantumChannel(kraus=tuple(kraus))


def choi_min_eigenvalue(channel: QuantumChannel) -> float:
    return float(np.linalg.eigvalsh(hermitize(channel.choi()))[0])
