"""Tests for channels, POVMs, dilations and recovery maps."""

from __future__ import annotations

from typing import Literal

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from renyilab.channels import (
    Povm,
    QuantumChannel,
    apply,
    channel_from_isometry,
    choi_min_eigenvalue,
    classical_channel,
    depolarizing,
    discord_eb_channel,
    holevo_eb_channel,
    identity_channel,
    measurement_channel,
    measurement_dilation,
    partial_trace_channel,
    petz_conditional_extend,
    petz_map,
    random_channel,
    rank_one_dilation,
    stinespring,
)
from renyilab.errors import InvalidPovm, ShapeMismatch
from renyilab.linalg import SubsystemShape
from renyilab.states import flagged_state, make_rng, random_density

EXTENSION_DIRECTIONS: tuple[Literal["C->AC", "C->BC"], ...] = ("C->AC", "C->BC")


def _dual_pairing(
    channel: QuantumChannel, rho: np.ndarray, x: np.ndarray
) -> tuple[complex, complex]:
    return np.trace(channel(rho) @ x), np.trace(rho @ channel.adjoint()(x))


def test_random_channel_is_cptp() -> None:
    channel = random_channel(2, 3, make_rng(0))
    assert (channel.d_in, channel.d_out) == (2, 3)
    assert channel.trace_preservation_residual() < 1e-12
    assert choi_min_eigenvalue(channel) > -1e-12
    assert channel.adjoint().unitality_residual() < 1e-12


def test_adjoint_is_the_trace_dual() -> None:
    rng = make_rng(1)
    channel = random_channel(3, 2, rng)
    rho = random_density(3, rng).matrix
    x = random_density(2, rng).matrix
    lhs, rhs = _dual_pairing(channel, rho, x)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_stinespring_round_trip() -> None:
    rng = make_rng(2)
    channel = random_channel(2, 2, rng)
    v = stinespring(channel)
    assert v.residual() < 1e-12
    rebuilt = channel_from_isometry(v.matrix, channel.d_out)
    rho = random_density(2, rng).matrix
    assert np.allclose(rebuilt(rho), channel(rho), atol=1e-12)


def test_from_kraus_checks_trace_preservation() -> None:
    with pytest.raises(ShapeMismatch):
        QuantumChannel.from_kraus([0.5 * np.eye(2)])


def test_depolarizing_and_classical_channels() -> None:
    rho = random_density(2, make_rng(3)).matrix
    assert np.allclose(depolarizing(2, 1.0)(rho), np.eye(2) / 2)
    flip = classical_channel(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(flip(np.diag([0.8, 0.2])), np.diag([0.2, 0.8]))


def test_partial_trace_channel_matches_reduce() -> None:
    rho = random_density((2, 3), make_rng(4), labels=("A", "B"))
    channel = partial_trace_channel(rho.shape, ("A",))
    assert np.allclose(channel(rho.matrix), rho.marginal("B"))
    assert channel.trace_preservation_residual() < 1e-12


def test_apply_on_one_factor() -> None:
    rho = random_density((2, 2), make_rng(5), labels=("A", "B"))
    out = apply(identity_channel(2), rho, "A")
    assert np.allclose(out.matrix, rho.matrix)
    measured = apply(measurement_channel(Povm.basis(2)), rho, "A", "X")
    assert measured.labels == ("X", "B")
    x = measured.marginal("X")
    assert np.allclose(x, np.diag(np.diag(x)))


def test_povm_validation() -> None:
    with pytest.raises(InvalidPovm):
        Povm.from_effects([np.diag([1.0, 0.0])])
    with pytest.raises(InvalidPovm):
        Povm.from_effects([np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])])


def test_rank_one_povm_from_isometry_rows() -> None:
    povm = Povm.random_rank_one(2, 3, make_rng(6))
    assert povm.rank_one
    assert len(povm) == 3
    assert povm.completeness_residual() < 1e-12
    rows = povm.rank_one_isometry()
    rebuilt = Povm.from_isometry(rows)
    for a, b in zip(povm.effects, rebuilt.effects, strict=True):
        assert np.allclose(a, b, atol=1e-12)


def test_refine_and_coarse_grain() -> None:
    fine = Povm.random_rank_one(2, 4, make_rng(7))
    coarse = fine.coarse_grain([(0, 1), (2, 3)])
    assert not coarse.rank_one
    refined = coarse.refine()
    assert refined.rank_one
    assert len(refined) == 4
    assert refined.completeness_residual() < 1e-10


def test_dilations_are_isometries_that_reproduce_the_measurement() -> None:
    rho = random_density((2, 2), make_rng(8), labels=("A", "B"))
    povm = Povm.random_rank_one(2, 3, make_rng(9))
    dilation = rank_one_dilation(povm.rank_one_isometry())
    assert dilation.isometry.residual() < 1e-12
    omega = dilation.apply(rho, "A")
    assert omega.labels == ("X", "E", "B")
    expected = apply(measurement_channel(povm), rho, "A", "X")
    assert np.allclose(omega.marginal(("X", "B")), expected.matrix, atol=1e-12)

    coarse = Povm.random_rank_one(2, 4, make_rng(10)).coarse_grain([(0, 1), (2, 3)])
    general = measurement_dilation(coarse)
    assert general.isometry.residual() < 1e-10
    omega = general.apply(rho, "A")
    assert omega.labels == ("E", "XE", "Y", "X", "B")
    expected = apply(measurement_channel(coarse), rho, "A", "X")
    assert np.allclose(omega.marginal(("X", "B")), expected.matrix, atol=1e-10)


def test_petz_map_recovers_the_reference() -> None:
    rng = make_rng(11)
    sigma = random_density(3, rng).matrix
    channel = random_channel(3, 2, rng)
    recovery = petz_map(sigma, channel)
    assert np.allclose(recovery(channel(sigma)), sigma, atol=1e-9)


def test_petz_extension_recovers_markov_chains() -> None:
    rng = make_rng(15)
    product = random_density(2, rng, labels=("A",)).tensor(
        random_density((2, 2), rng, labels=("B", "C"))
    )
    # A - C - B with C a classical flag
    parts = [
        random_density(2, rng, labels=("A",)).tensor(random_density(2, rng, labels=("B",)))
        for _ in range(3)
    ]
    chain = flagged_state([0.2, 0.3, 0.5], parts, ("C",))
    for state in (product, chain):
        for direction in EXTENSION_DIRECTIONS:
            recovered = petz_conditional_extend(state, direction)
            assert recovered.shape == state.shape
            assert np.allclose(recovered.matrix, state.matrix, atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_petz_extension_is_a_state_with_the_recovered_marginals(seed: int) -> None:
    rho = random_density((2, 2, 2), make_rng(seed), labels=("A", "B", "C"))
    marginals = (("A", "C"), "B"), (("B", "C"), "A")
    for direction, (grown, untouched) in zip(EXTENSION_DIRECTIONS, marginals, strict=True):
        extended = petz_conditional_extend(rho, direction)
        assert np.trace(extended.matrix).real == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.eigvalsh(extended.matrix).min() >= -1e-10
        assert np.allclose(extended.marginal(grown), rho.marginal(grown), atol=1e-9)
        assert np.allclose(extended.marginal(untouched), rho.marginal(untouched), atol=1e-9)


def test_petz_extension_rejects_unknown_directions() -> None:
    rho = random_density((2, 2, 2), make_rng(16), labels=("A", "B", "C"))
    with pytest.raises(ValueError):
        petz_conditional_extend(rho, "A->BC")  # type: ignore[arg-type]


def test_measure_prepare_channels_fix_the_reference() -> None:
    rho = random_density((2, 2), make_rng(12), labels=("A", "B"))
    povm = Povm.random_rank_one(2, 3, make_rng(13))
    eb = discord_eb_channel(rho, povm)
    assert eb.trace_preservation_residual() < 1e-10
    assert np.allclose(eb(rho.marginal("A")), rho.marginal("A"), atol=1e-10)
    rho_b = rho.marginal("B")
    assert np.allclose(holevo_eb_channel(rho_b, povm)(rho_b), rho_b, atol=1e-10)
    coarse = Povm.random_rank_one(2, 4, make_rng(14)).coarse_grain([(0, 1), (2, 3)])
    with pytest.raises(InvalidPovm):
        holevo_eb_channel(rho_b, coarse)


def test_channel_rejects_wrong_input_dimension() -> None:
    with pytest.raises(ShapeMismatch):
        identity_channel(2)(np.eye(3) / 3)
    with pytest.raises(ShapeMismatch):
        partial_trace_channel(SubsystemShape.of(A=2), ("Z",))
