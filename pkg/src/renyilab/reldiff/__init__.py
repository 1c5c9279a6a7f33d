"""Relative-entropy differences, their Rényi generalizations and remainder terms."""

from renyilab.reldiff.differences import (
    alpha_slope_check,
    delta_alpha,
    delta_alpha_monotonicity_margin,
    delta_tilde_alpha,
    delta_vn,
    lie_trotter_limit_check,
    lie_trotter_target,
    variance_v,
    y_gamma_trace,
)
from renyilab.reldiff.instance import RelDiffInstance
from renyilab.reldiff.remainders import (
    discord_remainder,
    holevo_remainder,
    joint_convexity_remainder,
    monotonicity_remainder,
    unitary_channel_exact_mono,
)

__all__ = [
    "RelDiffInstance",
    "alpha_slope_check",
    "delta_alpha",
    "delta_alpha_monotonicity_margin",
    "delta_tilde_alpha",
    "delta_vn",
    "discord_remainder",
    "holevo_remainder",
    "joint_convexity_remainder",
    "lie_trotter_limit_check",
    "lie_trotter_target",
    "monotonicity_remainder",
    "unitary_channel_exact_mono",
    "variance_v",
    "y_gamma_trace",
]
