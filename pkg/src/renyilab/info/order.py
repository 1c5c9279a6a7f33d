"""Rényi order with regime tagging."""

from __future__ import annotations

from dataclasses import dataclass

from renyilab.contracts.types import Regime
from renyilab.errors import InvalidOrder

VN_WINDOW = 1e-6


@dataclass(frozen=True, slots=True)
class RenyiOrder:
    alpha: float
    regime: Regime

    @classmethod
    def parse(cls, alpha: float) -> RenyiOrder:
        if not alpha > 0:
            raise InvalidOrder(f"Rényi order must be positive, got {alpha}")
        if abs(alpha - 1.0) < VN_WINDOW:
            regime = Regime.ONE
        elif alpha < 1.0:
            regime = Regime.BELOW_ONE
        elif alpha <= 2.0:
            regime = Regime.ONE_TO_TWO
        else:
            regime = Regime.ABOVE_TWO
        return cls(alpha=float(alpha), regime=regime)

    @property
    def is_von_neumann(self) -> bool:
        return self.regime is Regime.ONE

    @property
    def data_processing(self) -> bool:
        """Whether the Petz-type quantities obey data processing at this order."""
        return self.regime in (Regime.BELOW_ONE, Regime.ONE, Regime.ONE_TO_TWO)


def is_von_neumann(alpha: float) -> bool:
    return abs(alpha - 1.0) < VN_WINDOW
