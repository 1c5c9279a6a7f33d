"""Tests for conditional mutual informations and their structural lemmas."""

from __future__ import annotations

import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from renyilab.errors import ShapeMismatch
from renyilab.info import (
    classical_conditioning_value,
    renyi_cmi,
    renyi_cmi_optimized_check,
    renyi_cmi_petz,
    renyi_mutual_info,
    sandwiched_cmi,
    vn_cmi,
)
from renyilab.states import (
    DensityOperator,
    flagged_state,
    make_rng,
    random_density,
    random_four_party_pure,
)

ORDERS = (0.3, 0.7, 1.5, 2.0)


def _tripartite(seed: int, d: int = 2) -> DensityOperator:
    return random_density((d, d, d), make_rng(seed), labels=("A", "B", "E"))


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_duality_on_four_party_pure_states(seed: int) -> None:
    rho = random_four_party_pure(make_rng(seed)).density()
    for alpha in ORDERS:
        left = renyi_cmi(rho, alpha, "A", "B", "C")
        right = renyi_cmi(rho, alpha, "B", "A", "D")
        assert left == pytest.approx(right, abs=1e-8)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_sibson_form_never_exceeds_petz_form(seed: int) -> None:
    rho = _tripartite(seed)
    for alpha in (0.5, 1.5, 2.0):
        assert renyi_cmi(rho, alpha) <= renyi_cmi_petz(rho, alpha, "A", "B", "E") + 1e-9


def test_von_neumann_limits() -> None:
    rho = _tripartite(5)
    target = vn_cmi(rho)
    for alpha in (1.0 - 1e-4, 1.0 + 1e-4):
        assert renyi_cmi(rho, alpha) == pytest.approx(target, abs=1e-3)
        assert renyi_cmi_petz(rho, alpha, "A", "B", "E") == pytest.approx(target, abs=1e-3)
        assert sandwiched_cmi(rho, alpha, "A", "B", "E") == pytest.approx(target, abs=1e-3)
    assert renyi_cmi(rho, 1.0) == target


def test_markov_product_has_zero_cmi() -> None:
    rng = make_rng(9)
    state = random_density((2, 3), rng, labels=("A", "E")).tensor(
        random_density(2, rng, labels=("B",))
    )
    assert vn_cmi(state) == pytest.approx(0.0, abs=1e-10)
    for alpha in ORDERS:
        assert renyi_cmi(state, alpha) == pytest.approx(0.0, abs=1e-9)
        assert renyi_cmi_petz(state, alpha, "A", "B", "E") == pytest.approx(0.0, abs=1e-9)
        assert sandwiched_cmi(state, alpha, "A", "B", "E") == pytest.approx(0.0, abs=1e-9)


def test_empty_conditioning_gives_mutual_information() -> None:
    rho = random_density((2, 3), make_rng(12))
    for alpha in (0.5, 2.0):
        expected = renyi_mutual_info(rho, alpha)
        assert renyi_cmi(rho, alpha, "A", "B", ()) == pytest.approx(expected, abs=1e-10)


def test_overlapping_labels_are_rejected() -> None:
    with pytest.raises(ShapeMismatch):
        renyi_cmi(_tripartite(0), 0.5, "A", "A", "E")


def test_tensor_product_additivity() -> None:
    rng = make_rng(21)
    rho = random_density((2, 2, 2), rng, labels=("A", "B", "E"))
    tau = random_density((2, 2, 2), rng, labels=("A2", "B2", "E2"))
    product = rho.tensor(tau)
    for alpha in ORDERS:
        joint = renyi_cmi(product, alpha, ("A", "A2"), ("B", "B2"), ("E", "E2"))
        split = renyi_cmi(rho, alpha) + renyi_cmi(tau, alpha, "A2", "B2", "E2")
        assert joint == pytest.approx(split, abs=1e-9)


def test_classical_conditioning_formula() -> None:
    rng = make_rng(33)
    probs = rng.dirichlet(np.ones(3))
    parts = [random_density((2, 2, 2), rng, labels=("A", "B", "E")) for _ in range(3)]
    flagged = flagged_state(probs, parts)
    for alpha in ORDERS:
        conditioned = renyi_cmi(flagged, alpha, "A", "B", ("X", "E"))
        formula = classical_conditioning_value(probs, [renyi_cmi(p, alpha) for p in parts], alpha)
        assert conditioned == pytest.approx(formula, abs=1e-9)


def test_classical_conditioning_value_limits() -> None:
    probs = [0.25, 0.75]
    assert classical_conditioning_value(probs, [1.0, 3.0], 1.0) == pytest.approx(2.5)
    assert classical_conditioning_value(probs, [0.4, 0.4], 1.7) == pytest.approx(0.4)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
@pytest.mark.parametrize("seed", [2, 5])
def test_optimized_form_matches_closed_form(alpha: float, seed: int) -> None:
    rho = _tripartite(seed)
    closed = renyi_cmi(rho, alpha)
    optimized = renyi_cmi_optimized_check(rho, alpha, restarts=3, seed=seed)
    assert optimized == pytest.approx(closed, abs=1e-5)
    assert optimized >= closed - 1e-9


def test_optimized_form_rejects_von_neumann_order() -> None:
    with pytest.raises(ValueError):
        renyi_cmi_optimized_check(_tripartite(1), 1.0)


def test_sandwiched_cmi_of_maximally_correlated_state() -> None:
    # classical perfectly correlated A, B and trivial E
    matrix = np.zeros((8, 8))
    matrix[0, 0] = matrix[6, 6] = 0.5
    state = DensityOperator.from_matrix(matrix, _tripartite(0).shape)
    assert sandwiched_cmi(state, 2.0, "A", "B", "E") == pytest.approx(math.log(2), abs=1e-9)
    assert vn_cmi(state) == pytest.approx(math.log(2), abs=1e-10)
