"""Exception hierarchy for renyi-lab."""

from __future__ import annotations


class RenyiLabError(ValueError):
    """Base class for all validation and numerical errors raised by the library."""


class NonHermitianInput(RenyiLabError):
    """Matrix handed to the Hermitian calculus is not Hermitian within tolerance."""


class NegativeEigenvalue(RenyiLabError):
    """Operator required to be PSD has an eigenvalue below the relative cutoff."""


class ShapeMismatch(RenyiLabError):
    """Subsystem labels or dimensions do not fit the operator."""


class InvalidPovm(RenyiLabError):
    """Effects are not PSD or do not sum to the identity."""


class InvalidOrder(RenyiLabError):
    """Rényi order outside the admissible range for the requested quantity."""


class SingularSigma(RenyiLabError):
    """Petz map requested on a singular reference state with support handling disabled."""


class NotStrictlyPositive(RenyiLabError):
    """Relative-entropy-difference inputs must be positive definite."""


class OptimizerBudgetExceeded(RenyiLabError):
    """Optimizer ran out of evaluations before meeting its tolerance."""


class InvalidPolicy(RenyiLabError):
    """Tolerance file is missing fields or names an unknown decision policy."""
