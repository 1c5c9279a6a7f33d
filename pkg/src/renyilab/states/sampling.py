"""Haar-random sampling with explicit, counter-based generators."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from scipy import linalg

from renyilab.errors import ShapeMismatch
from renyilab.linalg import Matrix, SubsystemShape, hermitize
from renyilab.states.density import DensityOperator, Ensemble, PureState, flagged_state

MAX_RESAMPLES = 1000


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for stream ``key`` of ``seed``; Philox keeps streams independent."""
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(sequence))


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> Matrix:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(dim: int, rng: np.random.Generator) -> Matrix:
    """Haar unitary from the QR decomposition of a Ginibre matrix with the phase fix."""
    q, r = linalg.qr(_ginibre(rng, dim, dim))
    d = np.diag(r)
    return np.asarray(q * (d / np.abs(d)), dtype=np.complex128)


def random_isometry(d_out: int, d_in: int, rng: np.random.Generator) -> Matrix:
    if d_out < d_in:
        raise ShapeMismatch(f"no isometry from dimension {d_in} into {d_out}")
    return random_unitary(d_out, rng)[:, :d_in]


def random_pure_vector(dim: int, rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    v = _ginibre(rng, dim, 1).reshape(-1)
    return np.asarray(v / np.linalg.norm(v), dtype=np.complex128)


def random_pure(
    dims: int | tuple[int, ...], rng: np.random.Generator, labels: tuple[str, ...] | None = None
) -> PureState:
    dims_t = (dims,) if isinstance(dims, int) else tuple(dims)
    names = labels or tuple("ABCDEFGH"[: len(dims_t)])
    shape = SubsystemShape(dims=dims_t, labels=names)
    return PureState(amplitudes=random_pure_vector(shape.total, rng), shape=shape)


def random_density(
    dim: int | tuple[int, ...],
    rng: np.random.Generator,
    rank: int | None = None,
    labels: tuple[str, ...] | None = None,
) -> DensityOperator:
    """Partial trace of a Haar-random purification on dim * rank."""
    dims_t = (dim,) if isinstance(dim, int) else tuple(dim)
    names = labels or tuple("ABCDEFGH"[: len(dims_t)])
    shape = SubsystemShape(dims=dims_t, labels=names)
    r = shape.total if rank is None else rank
    if not 1 <= r <= shape.total:
        raise ShapeMismatch(f"rank {r} outside [1, {shape.total}]")
    psi = random_pure_vector(shape.total * r, rng).reshape(shape.total, r)
    return DensityOperator(matrix=hermitize(psi @ psi.conj().T), shape=shape)


def random_strict_density(
    dim: int | tuple[int, ...],
    rng: np.random.Generator,
    reject_eps: float,
    labels: tuple[str, ...] | None = None,
) -> DensityOperator:
    """Full-rank random state, resampled until its smallest eigenvalue is at least ``reject_eps``."""
    for _ in range(MAX_RESAMPLES):
        rho = random_density(dim, rng, labels=labels)
        if float(np.linalg.eigvalsh(rho.matrix)[0]) >= reject_eps:
            return rho
    raise ShapeMismatch(f"could not sample a state with min eigenvalue >= {reject_eps}")


def random_separable_ensemble(
    d_a: int, d_b: int, n_terms: int, rng: np.random.Generator, labels: tuple[str, str] = ("A", "B")
) -> Ensemble:
    """Random product pure states with Dirichlet weights."""
    shape = SubsystemShape(dims=(d_a, d_b), labels=labels)
    probs = rng.dirichlet(np.ones(n_terms))
    states = []
    for _ in range(n_terms):
        v = np.kron(random_pure_vector(d_a, rng), random_pure_vector(d_b, rng))
        states.append(DensityOperator(matrix=np.outer(v, v.conj()), shape=shape))
    return Ensemble.of(probs, states)


def random_separable(d_a: int, d_b: int, n_terms: int, rng: np.random.Generator) -> DensityOperator:
    return random_separable_ensemble(d_a, d_b, n_terms, rng).average()


def random_pure_ensemble(
    dims: tuple[int, ...],
    n_terms: int,
    rng: np.random.Generator,
    labels: tuple[str, ...] = ("A", "B"),
) -> Ensemble:
    probs = rng.dirichlet(np.ones(n_terms))
    return Ensemble.of(probs, [random_pure(dims, rng, labels).density() for _ in range(n_terms)])


def random_cq_state(
    n_flags: int, d_b: int, rng: np.random.Generator, flag_label: str = "X", label: str = "B"
) -> DensityOperator:
    probs = rng.dirichlet(np.ones(n_flags))
    states = [random_density(d_b, rng, labels=(label,)) for _ in range(n_flags)]
    return flagged_state(probs, states, (flag_label,))


def random_four_party_pure(
    rng: np.random.Generator, dims: tuple[int, int, int, int] = (2, 2, 2, 2)
) -> PureState:
    return random_pure(dims, rng, ("A", "B", "C", "D"))
