"""Hermitian matrix calculus and tensor-product bookkeeping."""

from renyilab.linalg.operators import (
    HermitianOperator,
    Matrix,
    alpha_norm,
    hermitian_eigh,
    hermitize,
    is_psd,
    matrix_exp,
    matrix_function,
    matrix_log,
    matrix_power,
    real_trace,
    sandwich,
    support_projector,
    trace_norm,
)
from renyilab.linalg.tensor import (
    SubsystemShape,
    embed,
    kron_all,
    partial_trace,
    partial_transpose,
    permute,
    tensor,
)

__all__ = [
    "HermitianOperator",
    "Matrix",
    "SubsystemShape",
    "alpha_norm",
    "embed",
    "hermitian_eigh",
    "hermitize",
    "is_psd",
    "kron_all",
    "matrix_exp",
    "matrix_function",
    "matrix_log",
    "matrix_power",
    "partial_trace",
    "partial_transpose",
    "permute",
    "real_trace",
    "sandwich",
    "support_projector",
    "tensor",
    "trace_norm",
]
