"""POVMs, measurement channels and their isometric dilations."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from renyilab.channels.channel import Isometry, QuantumChannel, apply_local
from renyilab.errors import InvalidPovm, NegativeEigenvalue
from renyilab.linalg import Matrix, SubsystemShape, hermitian_eigh, hermitize
from renyilab.states import DensityOperator, basis_state, random_isometry

POVM_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class RankOneTerm:
    """mu |phi><phi| inside coarse effect ``outcome``; ``sub`` indexes it within that effect."""

    outcome: int
    sub: int
    weight: float
    vector: npt.NDArray[np.complex128]


@dataclass(frozen=True, slots=True)
class Povm:
    effects: tuple[Matrix, ...]
    rank_one: bool

    @classmethod
    def from_effects(cls, effects: Iterable[npt.ArrayLike], *, tol: float = POVM_TOL) -> Povm:
        ops = tuple(hermitize(np.asarray(e, dtype=np.complex128)) for e in effects)
        if not ops:
            raise InvalidPovm("a POVM needs at least one effect")
        d = ops[0].shape[0]
        if any(e.shape != (d, d) for e in ops):
            raise InvalidPovm("effects must share one square shape")
        ranks = []
        for e in ops:
            try:
                _, _, mask = hermitian_eigh(e)
            except NegativeEigenvalue as exc:
                raise InvalidPovm(f"effect is not PSD: {exc}") from exc
            if np.max(np.abs(e)) <= tol:
                mask = np.zeros_like(mask)
            ranks.append(int(np.count_nonzero(mask)))
        total = sum(ops, start=np.zeros((d, d), dtype=np.complex128))
        residual = float(np.max(np.abs(total - np.eye(d))))
        if residual > tol:
            raise InvalidPovm(f"effects sum to identity only within {residual:.3e}")
        return cls(effects=ops, rank_one=all(r <= 1 for r in ranks))

    @classmethod
    def from_isometry(cls, v: npt.ArrayLike) -> Povm:
        """Rank-one POVM whose effects are |phi_x><phi_x| with <phi_x| the rows of ``v``."""
        m = np.asarray(v, dtype=np.complex128)
        return cls.from_effects(np.outer(row.conj(), row) for row in m)

    @classmethod
    def basis(cls, d: int) -> Povm:
        return cls.from_isometry(np.eye(d, dtype=np.complex128))

    @classmethod
    def random_rank_one(cls, d: int, n: int, rng: np.random.Generator) -> Povm:
        return cls.from_isometry(random_isometry(n, d, rng))

    @property
    def dim(self) -> int:
        return int(self.effects[0].shape[0])

    def __len__(self) -> int:
        return len(self.effects)

    def completeness_residual(self) -> float:
        total = sum(self.effects, start=np.zeros((self.dim,) * 2, dtype=np.complex128))
        return float(np.max(np.abs(total - np.eye(self.dim))))

    def probabilities(self, rho: npt.ArrayLike) -> npt.NDArray[np.float64]:
        m = np.asarray(rho, dtype=np.complex128)
        return np.array([float(np.real(np.trace(e @ m))) for e in self.effects])

    def coarse_grain(self, groups: Sequence[Sequence[int]]) -> Povm:
        zero = np.zeros((self.dim,) * 2, dtype=np.complex128)
        return Povm.from_effects(
            sum((self.effects[i] for i in group), start=zero) for group in groups
        )

    def rank_one_terms(self) -> list[RankOneTerm]:
        """Eigen-decomposition of every effect into weighted rank-one projectors."""
        terms = []
        for x, effect in enumerate(self.effects):
            w, v, mask = hermitian_eigh(effect)
            for sub, idx in enumerate(np.flatnonzero(mask)[::-1]):
                term = RankOneTerm(outcome=x, sub=sub, weight=float(w[idx]), vector=v[:, idx])
                terms.append(term)
        return terms

    def rank_one_isometry(self) -> Matrix:
        """Rows <phi~_x| with |phi~_x><phi~_x| the effects; requires a rank-one POVM."""
        if not self.rank_one:
            raise InvalidPovm("rank_one_isometry needs rank-one effects")
        rows = np.zeros((len(self.effects), self.dim), dtype=np.complex128)
        for term in self.rank_one_terms():
            rows[term.outcome] = np.sqrt(term.weight) * term.vector.conj()
        return rows

    def refine(self) -> Povm:
        """Rank-one refinement {mu_xy |phi_xy><phi_xy|}."""
        return Povm.from_effects(
            t.weight * np.outer(t.vector, t.vector.conj()) for t in self.rank_one_terms()
        )


def measurement_channel(povm: Povm) -> QuantumChannel:
    """A -> X map sigma -> sum_x Tr(Lambda_x sigma) |x><x|."""
    n = len(povm)
    kraus = []
    for term in povm.rank_one_terms():
        flag = basis_state(n, term.outcome)
        kraus.append(np.sqrt(term.weight) * np.outer(flag, term.vector.conj()))
    return QuantumChannel(kraus=tuple(kraus))


@dataclass(frozen=True, slots=True)
class Dilation:
    """Isometry out of the measured system together with the layout of its output factors."""

    isometry: Isometry
    out_shape: SubsystemShape
    environment: tuple[str, ...]
    register: tuple[str, ...]

    def apply(self, rho: DensityOperator, label: str) -> DensityOperator:
        out = self.out_shape
        return apply_local([self.isometry.matrix], rho, label, out.dims, out.labels)


def rank_one_dilation(rows: npt.ArrayLike, register: str = "X", environment: str = "E") -> Dilation:
    """U = sum_x |x>_X |x>_E <phi~_x| for the rank-one POVM with rows <phi~_x|."""
    v = np.asarray(rows, dtype=np.complex128)
    n, d = v.shape
    u = np.zeros((n * n, d), dtype=np.complex128)
    for x in range(n):
        u[x * n + x] = v[x]
    return Dilation(
        isometry=Isometry(matrix=u),
        out_shape=SubsystemShape(dims=(n, n), labels=(register, environment)),
        environment=(environment,),
        register=(register,),
    )


def measurement_dilation(povm: Povm) -> Dilation:
    """Isometric extension of the measurement map of ``povm``.

    Rank-one POVMs use U = sum_x |x>_X |x>_E <phi~_x| with output (X, E). General POVMs
    use U = sum_xy sqrt(mu_xy) |phi_xy>_E |x>_XE |y>_Y |x>_X <phi_xy| with output
    (E, XE, Y, X), whose environment is (E, XE, Y).
    """
    if povm.rank_one:
        return rank_one_dilation(povm.rank_one_isometry())
    d, n = povm.dim, len(povm)
    terms = povm.rank_one_terms()
    n_sub = max(t.sub for t in terms) + 1
    out = SubsystemShape(dims=(d, n, n_sub, n), labels=("E", "XE", "Y", "X"))
    u = np.zeros((out.total, d), dtype=np.complex128)
    for t in terms:
        flags = np.kron(basis_state(n_sub, t.sub), basis_state(n, t.outcome))
        ket = np.kron(t.vector, np.kron(basis_state(n, t.outcome), flags))
        u += np.sqrt(t.weight) * np.outer(ket, t.vector.conj())
    return Dilation(
        isometry=Isometry(matrix=u), out_shape=out, environment=("E", "XE", "Y"), register=("X",)
    )
