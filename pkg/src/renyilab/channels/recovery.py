"""Petz recovery maps and the measure-and-prepare channels built from a reference state."""

from __future__ import annotations

import logging
from typing import Literal

import numpy as np

from renyilab.channels.channel import QuantumChannel
from renyilab.channels.povm import Povm
from renyilab.errors import InvalidPovm, SingularSigma
from renyilab.linalg import Matrix, embed, hermitian_eigh, matrix_power, sandwich
from renyilab.states import DensityOperator

logger = logging.getLogger(__name__)


def petz_map(
    sigma: Matrix | DensityOperator, channel: QuantumChannel, *, allow_singular: bool = True
) -> QuantumChannel:
    """T(w) = sigma^1/2 N^dagger(N(sigma)^-1/2 w N(sigma)^-1/2) sigma^1/2 with Kraus sigma^1/2 K^dagger N(sigma)^-1/2."""
    s = (
        sigma.matrix
        if isinstance(sigma, DensityOperator)
        else np.asarray(sigma, dtype=np.complex128)
    )
    n_sigma = channel(s)
    _, _, mask = hermitian_eigh(s)
    if not np.all(mask):
        if not allow_singular:
            raise SingularSigma("petz map requested on a singular reference state")
        logger.warning(
            "petz.singular_sigma",
            extra={"extra": {"rank": int(np.count_nonzero(mask)), "dim": int(s.shape[0])}},
        )
    root = matrix_power(s, 0.5)
    inv_root = matrix_power(n_sigma, -0.5)
    return QuantumChannel(kraus=tuple(root @ k.conj().T @ inv_root for k in channel.kraus))


def petz_conditional_extend(
    rho: DensityOperator,
    direction: Literal["C->AC", "C->BC"] = "C->AC",
    labels: tuple[str, str, str] = ("A", "B", "C"),
) -> DensityOperator:
    """Recover rho_ABC from rho_BC (or rho_AC) via rho_AC^1/2 rho_C^-1/2 (.) rho_C^-1/2 rho_AC^1/2."""
    a, b, c = labels
    state = rho.reduce((a, b, c))
    shape = state.shape
    if direction == "C->AC":
        grown, given = (a, c), (b, c)
    elif direction == "C->BC":
        grown, given = (b, c), (a, c)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    grown_sorted = shape.keep(grown).labels
    given_sorted = shape.keep(given).labels
    lift = embed(matrix_power(state.marginal(grown), 0.5), shape, grown_sorted)
    inv_c = embed(matrix_power(state.marginal(c), -0.5), shape, (c,))
    base = embed(state.marginal(given), shape, given_sorted)
    return DensityOperator(matrix=sandwich(lift @ inv_c, base), shape=shape)


def measure_prepare_channel(reference: Matrix, povm: Povm) -> QuantumChannel:
    """sigma -> sum_x <phi_x|sigma|phi_x> R^1/2|phi_x><phi_x|R^1/2 / <phi_x|R|phi_x>."""
    if not povm.rank_one:
        raise InvalidPovm("measure-and-prepare channel needs a rank-one POVM")
    root = matrix_power(reference, 0.5)
    rows = povm.rank_one_isometry()
    kraus = []
    for row in rows:
        if np.linalg.norm(row) == 0:
            continue
        phi = row.conj()
        prepared = root @ phi
        norm = float(np.linalg.norm(prepared))
        if norm <= 1e-14:
            prepared, norm = phi, float(np.linalg.norm(phi))
        kraus.append(np.outer(prepared / norm, row))
    return QuantumChannel(kraus=tuple(kraus))


def discord_eb_channel(rho_ab: DensityOperator, povm: Povm, label: str = "A") -> QuantumChannel:
    """Entanglement-breaking channel on ``label`` that fixes rho_A."""
    return measure_prepare_channel(rho_ab.marginal(label), povm)


def holevo_eb_channel(rho_b: Matrix | DensityOperator, povm: Povm) -> QuantumChannel:
    """Entanglement-breaking channel on B that fixes rho_B."""
    m = rho_b.matrix if isinstance(rho_b, DensityOperator) else rho_b
    return measure_prepare_channel(m, povm)
