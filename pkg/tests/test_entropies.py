"""Tests for Rényi orders, entropies and relative entropies."""

from __future__ import annotations

import itertools
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from renyilab.channels import random_channel
from renyilab.contracts.types import Regime
from renyilab.errors import InvalidOrder
from renyilab.info import (
    RenyiOrder,
    is_von_neumann,
    renyi_conditional_entropy,
    renyi_entropy,
    renyi_mutual_info,
    renyi_relative_entropy,
    sandwiched_relative_entropy,
    vn_conditional_entropy,
    vn_entropy,
    vn_mutual_info,
    vn_relative_entropy,
)
from renyilab.states import (
    DensityOperator,
    fidelity,
    make_rng,
    maximally_entangled,
    random_density,
    random_strict_density,
)

ORDER_GRID = (0.25, 0.5, 0.75, 1.25, 1.5, 2.0)


def _pair(seed: int, d: int = 3) -> tuple[DensityOperator, DensityOperator]:
    rng = make_rng(seed)
    return random_density(d, rng), random_density(d, rng)


@pytest.mark.parametrize(
    ("alpha", "regime"),
    [
        (0.5, Regime.BELOW_ONE),
        (1.0, Regime.ONE),
        (1.0 + 1e-8, Regime.ONE),
        (1.5, Regime.ONE_TO_TWO),
        (2.0, Regime.ONE_TO_TWO),
        (3.0, Regime.ABOVE_TWO),
    ],
)
def test_order_regimes(alpha: float, regime: Regime) -> None:
    assert RenyiOrder.parse(alpha).regime is regime


@pytest.mark.parametrize("alpha", [0.0, -0.5, float("nan")])
def test_order_rejects_non_positive(alpha: float) -> None:
    with pytest.raises(InvalidOrder):
        RenyiOrder.parse(alpha)


def test_order_data_processing_flag() -> None:
    assert RenyiOrder.parse(1.7).data_processing
    assert not RenyiOrder.parse(2.5).data_processing
    assert is_von_neumann(1.0 - 1e-7)
    assert not is_von_neumann(1.01)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_maximally_mixed_entropy_is_log_dim(d: int) -> None:
    rho = DensityOperator.single(np.eye(d) / d)
    assert vn_entropy(rho) == pytest.approx(math.log(d), abs=1e-12)
    for alpha in (0.5, 2.0, 7.0):
        assert renyi_entropy(rho, alpha) == pytest.approx(math.log(d), abs=1e-12)


def test_renyi_entropy_collision_and_limit() -> None:
    rho = random_density(4, make_rng(3))
    purity = float(np.real(np.trace(rho.matrix @ rho.matrix)))
    assert renyi_entropy(rho, 2.0) == pytest.approx(-math.log(purity), abs=1e-12)
    assert renyi_entropy(rho, 1.0 + 1e-4) == pytest.approx(vn_entropy(rho), abs=1e-3)
    assert renyi_entropy(rho, 1.0 - 1e-4) == pytest.approx(vn_entropy(rho), abs=1e-3)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_renyi_entropy_decreases_in_order(seed: int) -> None:
    rho = random_density(3, make_rng(seed))
    values = [renyi_entropy(rho, a) for a in (0.3, 0.7, 1.0, 1.5, 2.0, 4.0)]
    assert all(x >= y - 1e-10 for x, y in zip(values, values[1:]))


def test_relative_entropies_vanish_on_equal_arguments() -> None:
    rho, _ = _pair(1)
    assert vn_relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)
    for alpha in (0.5, 1.5, 2.0):
        assert renyi_relative_entropy(rho, rho, alpha) == pytest.approx(0.0, abs=1e-10)
        assert sandwiched_relative_entropy(rho, rho, alpha) == pytest.approx(0.0, abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_sandwiched_below_petz_and_non_negative(seed: int) -> None:
    rho, sigma = _pair(seed)
    for alpha in (0.5, 0.8, 1.5, 2.0):
        sandwiched = sandwiched_relative_entropy(rho, sigma, alpha)
        assert sandwiched >= -1e-10
        assert sandwiched <= renyi_relative_entropy(rho, sigma, alpha) + 1e-9


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=10_000),
    d_in=st.integers(min_value=2, max_value=4),
    d_out=st.integers(min_value=2, max_value=4),
)
def test_data_processing_under_random_channels(seed: int, d_in: int, d_out: int) -> None:
    rng = make_rng(seed)
    rho = random_strict_density(d_in, rng, 1e-6)
    sigma = random_strict_density(d_in, rng, 1e-6)
    channel = random_channel(d_in, d_out, rng)
    n_rho, n_sigma = channel(rho.matrix), channel(sigma.matrix)
    for alpha in (0.3, 0.7, 1.5, 2.0):
        before = renyi_relative_entropy(rho, sigma, alpha)
        assert before - renyi_relative_entropy(n_rho, n_sigma, alpha) >= -1e-9
        if alpha >= 0.5:
            before = sandwiched_relative_entropy(rho, sigma, alpha)
            assert before - sandwiched_relative_entropy(n_rho, n_sigma, alpha) >= -1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), d=st.integers(min_value=2, max_value=4))
def test_relative_entropies_increase_in_order(seed: int, d: int) -> None:
    rng = make_rng(seed)
    rho, sigma = random_density(d, rng), random_density(d, rng)
    for divergence in (renyi_relative_entropy, sandwiched_relative_entropy):
        values = [divergence(rho, sigma, alpha) for alpha in ORDER_GRID]
        assert all(later - earlier >= -1e-9 for earlier, later in itertools.pairwise(values))


def test_sandwiched_half_is_minus_log_fidelity() -> None:
    rho, sigma = _pair(7)
    expected = -math.log(fidelity(rho, sigma))
    assert sandwiched_relative_entropy(rho, sigma, 0.5) == pytest.approx(expected, abs=1e-9)


def test_relative_entropy_order_limit() -> None:
    rho, sigma = _pair(11)
    target = vn_relative_entropy(rho, sigma)
    assert renyi_relative_entropy(rho, sigma, 1.0 + 1e-4) == pytest.approx(target, abs=1e-3)
    assert sandwiched_relative_entropy(rho, sigma, 1.0 - 1e-4) == pytest.approx(target, abs=1e-3)


def test_support_violations_give_infinity() -> None:
    rho = DensityOperator.single(np.diag([0.5, 0.5]))
    sigma = DensityOperator.single(np.diag([1.0, 0.0]))
    assert vn_relative_entropy(rho, sigma) == math.inf
    assert renyi_relative_entropy(rho, sigma, 2.0) == math.inf
    assert sandwiched_relative_entropy(rho, sigma, 1.5) == math.inf
    # below one only orthogonal supports diverge
    assert math.isfinite(renyi_relative_entropy(rho, sigma, 0.5))
    orthogonal = DensityOperator.single(np.diag([0.0, 1.0]))
    assert renyi_relative_entropy(sigma, orthogonal, 0.5) == math.inf


def test_negative_order_rejected_for_petz_divergence() -> None:
    rho, sigma = _pair(2)
    with pytest.raises(ValueError):
        renyi_relative_entropy(rho, sigma, -0.5)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0, 3.0])
def test_conditional_entropy_of_maximally_entangled_state(alpha: float) -> None:
    phi = maximally_entangled(3).density()
    assert renyi_conditional_entropy(phi, alpha) == pytest.approx(-math.log(3), abs=1e-9)


def test_mutual_information_of_product_and_entangled_states() -> None:
    rng = make_rng(4)
    product = random_density(2, rng, labels=("A",)).tensor(random_density(3, rng, labels=("B",)))
    for alpha in (0.5, 1.5, 2.0):
        assert renyi_mutual_info(product, alpha) == pytest.approx(0.0, abs=1e-10)
    assert vn_mutual_info(product) == pytest.approx(0.0, abs=1e-10)
    phi = maximally_entangled(2).density()
    assert vn_mutual_info(phi) == pytest.approx(2 * math.log(2), abs=1e-10)
    assert vn_conditional_entropy(phi) == pytest.approx(-math.log(2), abs=1e-10)
