"""Shared enums for renyi-lab contracts."""

from __future__ import annotations

from enum import Enum


class Regime(str, Enum):
    """Ranges of the Rényi order with distinct behaviour."""

    BELOW_ONE = "below_one"
    ONE = "one"
    ONE_TO_TWO = "one_to_two"
    ABOVE_TWO = "above_two"


class Branch(str, Enum):
    """How an entropic value was obtained."""

    CLOSED_FORM = "closed_form"
    OPTIMIZED = "optimized"
    VON_NEUMANN_LIMIT = "von_neumann_limit"


class OptimizerMethod(str, Enum):
    NELDER_MEAD = "nelder-mead"
    POLAR_RETRACTION_DESCENT = "polar-retraction-descent"
    RANDOM_SEARCH = "random-search"


class MeasureKind(str, Enum):
    SQUASHED = "squashed"
    DISCORD = "discord"
    DISCORD_MBPDS = "discord-mbpds"
    EOF = "eof"


class RemainderKind(str, Enum):
    MONOTONICITY = "monotonicity"
    JOINT_CONVEXITY = "joint-convexity"
    HOLEVO = "holevo"
    DISCORD = "discord"


class SuiteVerdict(str, Enum):
    """Gatekeeper verdicts for a property-suite run."""

    PASS = "PASS"
    PASS_WITH_WARNINGS = "PASS_WITH_WARNINGS"
    FAIL = "FAIL"
