"""Environment-driven settings."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import os
from pathlib import Path

DEFAULT_TOLERANCES = Path(__file__).resolve().parent / "gatekeeper" / "tolerances.yaml"


def _float_env(name: str, default: float) -> float:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return float(value)


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return int(value)


@dataclass(slots=True, frozen=True)
class Settings:
    spectral_cutoff: float = 1e-10
    reject_eps: float = 1e-6
    workers: int = 1
    violation_threshold: float = -1e-8
    tolerances_path: Path = DEFAULT_TOLERANCES


@lru_cache
def get_settings() -> Settings:
    return Settings(
        spectral_cutoff=_float_env("RENYILAB_SPECTRAL_CUTOFF", 1e-10),
        reject_eps=_float_env("RENYILAB_REJECT_EPS", 1e-6),
        workers=max(1, _int_env("RENYILAB_WORKERS", 1)),
        violation_threshold=_float_env("RENYILAB_VIOLATION_THRESHOLD", -1e-8),
        tolerances_path=Path(os.getenv("RENYILAB_TOLERANCES") or DEFAULT_TOLERANCES),
    )
