"""Tests for the optimization-defined measures against their closed-form values."""

from __future__ import annotations

import math

import numpy as np
import pytest

from renyilab.channels import Povm
from renyilab.contracts.models import OptimizerConfig
from renyilab.contracts.types import MeasureKind
from renyilab.errors import InvalidOrder, OptimizerBudgetExceeded, ShapeMismatch
from renyilab.info import renyi_entropy, vn_mutual_info
from renyilab.measures import (
    cc_invariance_test,
    convexity_gap,
    discord_mbpds,
    discord_objective,
    discord_pure_objective,
    discord_renyi,
    eof_bound_check,
    eof_renyi,
    minimize_over_isometries,
    polar_retraction,
    product_divergence,
    rank_one_refinement_test,
    squashed_entanglement,
    subadditivity_gap,
)
from renyilab.states import (
    DensityOperator,
    make_rng,
    maximally_entangled,
    random_cq_state,
    random_density,
    random_pure,
    random_pure_ensemble,
    random_separable_ensemble,
)

QUICK = OptimizerConfig(restarts=1, max_iters=200)


def _pure(seed: int) -> DensityOperator:
    return random_pure((2, 3), make_rng(seed)).density()


def test_polar_retraction_returns_isometry() -> None:
    m = make_rng(1).standard_normal((5, 2)) + 1j * make_rng(2).standard_normal((5, 2))
    v = polar_retraction(m)
    assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-12)
    assert np.allclose(polar_retraction(v), v, atol=1e-12)


def test_minimizer_rejects_impossible_shapes() -> None:
    with pytest.raises(ShapeMismatch):
        minimize_over_isometries(lambda v: 0.0, 2, 3, QUICK)
    with pytest.raises(ShapeMismatch):
        minimize_over_isometries(lambda v: 0.0, 4, 2, QUICK, [np.eye(3)])


def test_minimizer_keeps_optimal_warm_start() -> None:
    target = np.eye(3, 1, dtype=np.complex128)

    def objective(v: np.ndarray) -> float:
        return float(1.0 - abs(np.vdot(target[:, 0], v[:, 0])) ** 2)

    config = OptimizerConfig(restarts=3, max_iters=300)
    outcome = minimize_over_isometries(objective, 3, 1, config, [target])
    assert outcome.value == pytest.approx(0.0, abs=1e-12)
    assert outcome.restart_index == 0
    assert outcome.evaluations > 3


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_squashed_pure_state_closed_form(alpha: float) -> None:
    rho = _pure(3)
    expected = renyi_entropy(rho.marginal("A"), (2.0 - alpha) / alpha)
    for ext_dim in (1, 2):
        result = squashed_entanglement(rho, alpha, ext_dim, QUICK)
        assert result.measure is MeasureKind.SQUASHED
        assert result.value == pytest.approx(expected, abs=1e-6)
        assert result.feasibility_residual <= 1e-9


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("alpha", [0.5, 1.5, 2.0])
def test_maximally_entangled_normalization(d: int, alpha: float) -> None:
    phi = maximally_entangled(d).density()
    assert squashed_entanglement(phi, alpha, 1, QUICK).value == pytest.approx(math.log(d), abs=1e-6)
    assert discord_renyi(phi, alpha, d, QUICK).value == pytest.approx(math.log(d), abs=1e-6)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_squashed_vanishes_on_separable_warm_start(alpha: float) -> None:
    ensemble = random_separable_ensemble(2, 2, 3, make_rng(4))
    result = squashed_entanglement(ensemble.average(), alpha, 3, QUICK, warm_start=ensemble)
    assert result.value <= 1e-6


@pytest.mark.parametrize("alpha", [0.5, 1.5, 2.0])
def test_discord_vanishes_on_classical_quantum_states(alpha: float) -> None:
    rho = random_cq_state(2, 2, make_rng(5), flag_label="A", label="B")
    result = discord_renyi(rho, alpha, 2, QUICK)
    assert result.value <= 1e-6
    assert result.feasibility_residual <= 1e-9


def test_discord_rejects_orders_outside_its_domain_and_short_povms() -> None:
    rho = random_density((2, 2), make_rng(6))
    for alpha in (3.0, 1.0, 1.0 + 1e-8):
        with pytest.raises(InvalidOrder):
            discord_renyi(rho, alpha, cfg=QUICK)
    with pytest.raises(ShapeMismatch):
        discord_renyi(rho, 0.5, 1, QUICK)


def test_strict_budget_raises() -> None:
    rho = random_density((2, 2), make_rng(7))
    with pytest.raises(OptimizerBudgetExceeded):
        discord_renyi(rho, 0.5, cfg=OptimizerConfig(restarts=1, max_iters=2, strict=True))


def test_pure_discord_objective_matches_dilation() -> None:
    psi = random_pure((2, 2), make_rng(8))
    povm = Povm.random_rank_one(2, 3, make_rng(9))
    rows = povm.rank_one_isometry()
    for alpha in (0.5, 1.5):
        assert discord_pure_objective(psi, povm, alpha) == pytest.approx(
            discord_objective(psi.density(), rows, alpha), abs=1e-9
        )


def test_eof_pure_and_separable_states() -> None:
    rho = _pure(10)
    for alpha in (0.5, 2.0):
        result = eof_renyi(rho, alpha, 1, QUICK)
        assert result.value == pytest.approx(renyi_entropy(rho.marginal("A"), alpha), abs=1e-9)
    ensemble = random_separable_ensemble(2, 2, 3, make_rng(11))
    warm = eof_renyi(ensemble.average(), 0.5, 3, QUICK, warm_start=ensemble)
    assert warm.value <= 1e-8
    assert warm.feasibility_residual <= 1e-9


def test_eof_bound_on_pure_state() -> None:
    gap = eof_bound_check(_pure(12), 0.5, QUICK, ext_dim=1, n_terms=1)
    assert gap == pytest.approx(0.0, abs=1e-6)
    with pytest.raises(InvalidOrder):
        eof_bound_check(_pure(12), 2.0, QUICK)


def test_subadditivity_gap_on_pure_states() -> None:
    gap = subadditivity_gap(_pure(13), _pure(14), 0.5, QUICK, ext_dim=1)
    assert gap == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_subadditivity_gap_optimizes_the_joint_extension(alpha: float) -> None:
    rng = make_rng(19)
    sigma = random_density((2, 2), rng, rank=2)
    tau = random_density((2, 2), rng, rank=2)
    cfg = OptimizerConfig(restarts=1, max_iters=300)
    gap = subadditivity_gap(sigma, tau, alpha, cfg, ext_dim=2)
    assert math.isfinite(gap)
    assert gap >= -1e-9


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_convexity_gap_on_entangled_pure_ensembles(alpha: float) -> None:
    ensemble = random_pure_ensemble((2, 2), 3, make_rng(20))
    assert convexity_gap(ensemble, alpha, QUICK) >= -2e-6


def test_convexity_gap_on_separable_ensembles() -> None:
    ensemble = random_separable_ensemble(2, 2, 3, make_rng(21))
    assert convexity_gap(ensemble, 0.5, QUICK) == pytest.approx(0.0, abs=2e-6)


def test_cc_invariance_on_separable_ensemble() -> None:
    ensemble = random_separable_ensemble(2, 2, 2, make_rng(15))
    report = cc_invariance_test(ensemble, 0.5, QUICK)
    assert set(report.values) == {"AXA;B", "AXA;BXB", "A;BXB"}
    assert all(v <= 1e-6 for v in report.values.values())
    assert len(report.gaps) == 3


def test_product_divergence_limits() -> None:
    rng = make_rng(16)
    product = random_density(2, rng, labels=("A",)).tensor(random_density(2, rng, labels=("B",)))
    assert product_divergence(product, 0.5) == pytest.approx(0.0, abs=1e-9)
    rho = random_density((2, 2), rng)
    assert product_divergence(rho, 1.0) == pytest.approx(vn_mutual_info(rho), abs=1e-12)


def test_mbpds_vanishes_on_product_states() -> None:
    rng = make_rng(17)
    product = random_density(2, rng, labels=("A",)).tensor(random_density(2, rng, labels=("B",)))
    result = discord_mbpds(product, 1.5, OptimizerConfig(restarts=1, max_iters=50))
    assert result.value == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("alpha", [0.5, 1.5, 2.0])
def test_rank_one_refinement_never_increases_objective(alpha: float) -> None:
    rng = make_rng(18)
    rho = random_density((2, 2), rng)
    coarse = Povm.random_rank_one(2, 4, rng).coarse_grain([(0, 1), (2, 3)])
    assert rank_one_refinement_test(rho, coarse, alpha) >= -1e-9
    basis = Povm.basis(2)
    assert rank_one_refinement_test(rho, basis, alpha) == 0.0
