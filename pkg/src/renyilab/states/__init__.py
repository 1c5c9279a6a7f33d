"""Quantum states, purifications, fidelities and Haar-random samplers."""

from renyilab.states.density import (
    DensityOperator,
    Ensemble,
    PureState,
    basis_state,
    cq_state,
    fidelity,
    flagged_state,
    maximally_entangled,
    purification_matrix,
    purify,
    schmidt,
    trace_distance,
)
from renyilab.states.sampling import (
    make_rng,
    random_cq_state,
    random_density,
    random_four_party_pure,
    random_isometry,
    random_pure,
    random_pure_ensemble,
    random_pure_vector,
    random_separable,
    random_separable_ensemble,
    random_strict_density,
    random_unitary,
)

__all__ = [
    "DensityOperator",
    "Ensemble",
    "PureState",
    "basis_state",
    "cq_state",
    "fidelity",
    "flagged_state",
    "make_rng",
    "maximally_entangled",
    "purification_matrix",
    "purify",
    "random_cq_state",
    "random_density",
    "random_four_party_pure",
    "random_isometry",
    "random_pure",
    "random_pure_ensemble",
    "random_pure_vector",
    "random_separable",
    "random_separable_ensemble",
    "random_strict_density",
    "random_unitary",
    "schmidt",
    "trace_distance",
]
