"""Strictly positive (rho, sigma, N) triples for relative-entropy differences."""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from renyilab.channels import QuantumChannel, partial_trace_channel, random_channel
from renyilab.errors import NotStrictlyPositive, ShapeMismatch
from renyilab.linalg import Matrix, embed, hermitian_eigh
from renyilab.settings import get_settings
from renyilab.states import DensityOperator, random_strict_density
from renyilab.states.sampling import MAX_RESAMPLES


def _min_relative_eigenvalue(m: Matrix) -> float:
    w, _, _ = hermitian_eigh(m, require_psd=False)
    return float(w[0] / max(abs(float(w[-1])), 1e-300))


@dataclass(frozen=True, slots=True)
class RelDiffInstance:
    """rho, sigma positive definite and N strict, with N(rho), N(sigma) cached."""

    rho: DensityOperator
    sigma: DensityOperator
    channel: QuantumChannel
    n_rho: Matrix = field(init=False, repr=False)
    n_sigma: Matrix = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.rho.shape.dims != self.sigma.shape.dims:
            raise ShapeMismatch(
                f"rho {self.rho.shape.dims} and sigma {self.sigma.shape.dims} differ"
            )
        if self.channel.d_in != self.rho.dim:
            raise ShapeMismatch(
                f"channel input {self.channel.d_in} does not match state dimension {self.rho.dim}"
            )
        object.__setattr__(self, "n_rho", self.channel(self.rho.matrix))
        object.__setattr__(self, "n_sigma", self.channel(self.sigma.matrix))
        tau = get_settings().spectral_cutoff
        operators = (
            ("rho", self.rho.matrix),
            ("sigma", self.sigma.matrix),
            ("N(sigma)", self.n_sigma),
            ("N(rho)", self.n_rho),
        )
        for name, m in operators:
            if _min_relative_eigenvalue(m) <= tau:
                raise NotStrictlyPositive(f"{name} is not positive definite")

    @property
    def d_in(self) -> int:
        return self.channel.d_in

    @property
    def d_out(self) -> int:
        return self.channel.d_out

    @classmethod
    def random(
        cls,
        d_in: int,
        d_out: int,
        rng: np.random.Generator,
        reject_eps: float | None = None,
    ) -> RelDiffInstance:
        """Haar-random instance; states and channel outputs are resampled until their minimum eigenvalue reaches ``reject_eps``.

        The channel environment is large enough for N(sigma) to be full rank.
        """
        eps = get_settings().reject_eps if reject_eps is None else reject_eps
        rho = random_strict_density(d_in, rng, eps)
        sigma = random_strict_density(d_in, rng, eps)
        d_env = max(d_in, math.ceil(d_out / d_in))
        for _ in range(MAX_RESAMPLES):
            channel = random_channel(d_in, d_out, rng, d_env)
            outputs = (channel(rho.matrix), channel(sigma.matrix))
            if all(float(np.linalg.eigvalsh(m)[0]) >= eps for m in outputs):
                return cls(rho=rho, sigma=sigma, channel=channel)
        raise NotStrictlyPositive(f"no strict channel {d_in}->{d_out} found with reject_eps={eps}")

    @classmethod
    def consistency(
        cls, rho: DensityOperator, labels: tuple[str, str, str] = ("A", "B", "C")
    ) -> RelDiffInstance:
        """(rho_ABC, rho_B (x) rho_AC, Tr_A), under which the differences reduce to conditional mutual informations."""
        a, b, c = labels
        state = rho.reduce(labels)
        shape = state.shape
        ac = shape.keep((a, c)).labels
        sigma = embed(state.marginal(b), shape, (b,)) @ embed(state.marginal(ac), shape, ac)
        return cls(
            rho=state,
            sigma=DensityOperator.from_matrix(sigma, shape),
            channel=partial_trace_channel(shape, (a,)),
        )

