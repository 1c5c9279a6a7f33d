"""Subsystem layouts: tensor products, partial traces, embeddings and permutations.

The label order of a :class:`SubsystemShape` fixes the Kronecker layout. Partial
traces and embeddings keep the remaining labels in that order.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import reduce
import math

import numpy as np
import numpy.typing as npt

from renyilab.errors import ShapeMismatch
from renyilab.linalg.operators import Matrix


@dataclass(frozen=True, slots=True)
class SubsystemShape:
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.dims) != len(self.labels):
            raise ShapeMismatch(f"{len(self.dims)} dims for {len(self.labels)} labels")
        if len(set(self.labels)) != len(self.labels):
            raise ShapeMismatch(f"duplicate labels in {self.labels}")
        if any(d < 1 for d in self.dims):
            raise ShapeMismatch(f"dimensions must be positive, got {self.dims}")

    @classmethod
    def of(cls, **dims: int) -> SubsystemShape:
        return cls(dims=tuple(dims.values()), labels=tuple(dims.keys()))

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise ShapeMismatch(f"label {label!r} not in {self.labels}") from exc

    def dim(self, *labels: str) -> int:
        return math.prod(self.dims[self.index(label)] for label in labels)

    def keep(self, labels: Iterable[str]) -> SubsystemShape:
        wanted = set(labels)
        for label in wanted:
            self.index(label)
        pairs = [(d, lab) for d, lab in zip(self.dims, self.labels, strict=True) if lab in wanted]
        return SubsystemShape(
            dims=tuple(d for d, _ in pairs), labels=tuple(lab for _, lab in pairs)
        )

    def reorder(self, labels: Sequence[str]) -> SubsystemShape:
        if sorted(labels) != sorted(self.labels):
            raise ShapeMismatch(f"{tuple(labels)} is not a permutation of {self.labels}")
        dims = tuple(self.dims[self.index(lab)] for lab in labels)
        return SubsystemShape(dims=dims, labels=tuple(labels))

    def concat(self, other: SubsystemShape) -> SubsystemShape:
        return SubsystemShape(dims=self.dims + other.dims, labels=self.labels + other.labels)

    def replace(self, label: str, dims: Sequence[int], labels: Sequence[str]) -> SubsystemShape:
        i = self.index(label)
        return SubsystemShape(
            dims=self.dims[:i] + tuple(dims) + self.dims[i + 1 :],
            labels=self.labels[:i] + tuple(labels) + self.labels[i + 1 :],
        )

    def relabel(self, mapping: dict[str, str]) -> SubsystemShape:
        return SubsystemShape(
            dims=self.dims, labels=tuple(mapping.get(lab, lab) for lab in self.labels)
        )

    def check(self, matrix: npt.NDArray[np.complex128]) -> None:
        if matrix.shape != (self.total, self.total):
            raise ShapeMismatch(f"matrix shape {matrix.shape} does not match dims {self.dims}")


def tensor(a: npt.ArrayLike, b: npt.ArrayLike) -> Matrix:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def kron_all(*ops: npt.ArrayLike) -> Matrix:
    if not ops:
        return np.ones((1, 1), dtype=np.complex128)
    return reduce(tensor, ops)  # type: ignore[arg-type]


def partial_trace(a: npt.ArrayLike, shape: SubsystemShape, keep_labels: Iterable[str]) -> Matrix:
    """Trace out every label not in ``keep_labels``; kept factors stay in shape order."""
    m = np.asarray(a, dtype=np.complex128)
    shape.check(m)
    kept = shape.keep(keep_labels)
    n = len(shape.dims)
    t = m.reshape(shape.dims + shape.dims)
    current = n
    traced_out = (shape.index(lab) for lab in shape.labels if lab not in kept.labels)
    for i in sorted(traced_out, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + current)
        current -= 1
    return np.asarray(t.reshape(kept.total, kept.total), dtype=np.complex128)


def permute(
    a: npt.ArrayLike, shape: SubsystemShape, new_labels: Sequence[str]
) -> tuple[Matrix, SubsystemShape]:
    m = np.asarray(a, dtype=np.complex128)
    shape.check(m)
    target = shape.reorder(new_labels)
    n = len(shape.dims)
    perm = [shape.index(lab) for lab in target.labels]
    t = m.reshape(shape.dims + shape.dims).transpose(perm + [p + n for p in perm])
    return np.asarray(t.reshape(target.total, target.total), dtype=np.complex128), target


def embed(op: npt.ArrayLike, shape: SubsystemShape, target_labels: Sequence[str]) -> Matrix:
    """Lift ``op`` acting on ``target_labels`` (in that order) to ``shape``, padding identities."""
    m = np.asarray(op, dtype=np.complex128)
    targets = tuple(target_labels)
    expected = shape.dim(*targets) if targets else 1
    if m.shape != (expected, expected):
        raise ShapeMismatch(f"operator shape {m.shape} does not act on {targets} of {shape.dims}")
    rest = tuple(lab for lab in shape.labels if lab not in targets)
    full = tensor(m, np.eye(shape.dim(*rest) if rest else 1))
    layout = SubsystemShape(
        dims=tuple(shape.dims[shape.index(lab)] for lab in targets + rest),
        labels=targets + rest,
    )
    result, _ = permute(full, layout, shape.labels)
    return result


def partial_transpose(a: npt.ArrayLike, shape: SubsystemShape, label: str) -> Matrix:
    m = np.asarray(a, dtype=np.complex128)
    shape.check(m)
    n = len(shape.dims)
    i = shape.index(label)
    t = np.swapaxes(m.reshape(shape.dims + shape.dims), i, i + n)
    return np.asarray(t.reshape(shape.total, shape.total), dtype=np.complex128)
