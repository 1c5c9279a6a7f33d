"""Tolerance policy and suite verdicts."""

from renyilab.gatekeeper.policy import CheckPolicy, Gatekeeper, ToleranceConfig

__all__ = ["CheckPolicy", "Gatekeeper", "ToleranceConfig"]
