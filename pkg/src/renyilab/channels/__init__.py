"""Quantum channels, POVMs, dilations and recovery maps."""

from renyilab.channels.channel import (
    Isometry,
    QuantumChannel,
    adjoint,
    apply,
    apply_local,
    channel_from_isometry,
    choi_min_eigenvalue,
    classical_channel,
    depolarizing,
    identity_channel,
    partial_trace_channel,
    random_channel,
    stinespring,
    unitary_channel,
)
from renyilab.channels.povm import (
    Dilation,
    Povm,
    RankOneTerm,
    measurement_channel,
    measurement_dilation,
    rank_one_dilation,
)
from renyilab.channels.recovery import (
    discord_eb_channel,
    holevo_eb_channel,
    measure_prepare_channel,
    petz_conditional_extend,
    petz_map,
)

__all__ = [
    "Dilation",
    "Isometry",
    "Povm",
    "QuantumChannel",
    "RankOneTerm",
    "adjoint",
    "apply",
    "apply_local",
    "channel_from_isometry",
    "choi_min_eigenvalue",
    "classical_channel",
    "depolarizing",
    "discord_eb_channel",
    "holevo_eb_channel",
    "identity_channel",
    "measure_prepare_channel",
    "measurement_channel",
    "measurement_dilation",
    "partial_trace_channel",
    "petz_conditional_extend",
    "petz_map",
    "random_channel",
    "rank_one_dilation",
    "stinespring",
    "unitary_channel",
]
