"""renyi-lab: Rényi correlation measures and conjecture campaigns."""

__all__ = ["__version__"]

__version__ = "0.1.0"
