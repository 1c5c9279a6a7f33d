"""Optimization-defined correlation measures."""

from renyilab.measures.discord import (
    discord_mbpds,
    discord_objective,
    discord_pure_objective,
    discord_renyi,
    product_divergence,
    rank_one_refinement_test,
)
from renyilab.measures.formation import eof_bound_check, eof_objective, eof_renyi
from renyilab.measures.optimizer import (
    OptimizationOutcome,
    minimize_over_isometries,
    polar_retraction,
)
from renyilab.measures.squashed import (
    cc_invariance_test,
    convexity_gap,
    flag_extension_isometry,
    squashed_entanglement,
    squashed_objective,
    subadditivity_gap,
)

__all__ = [
    "OptimizationOutcome",
    "cc_invariance_test",
    "convexity_gap",
    "discord_mbpds",
    "discord_objective",
    "discord_pure_objective",
    "discord_renyi",
    "eof_bound_check",
    "eof_objective",
    "eof_renyi",
    "flag_extension_isometry",
    "minimize_over_isometries",
    "polar_retraction",
    "product_divergence",
    "rank_one_refinement_test",
    "squashed_entanglement",
    "squashed_objective",
    "subadditivity_gap",
]
