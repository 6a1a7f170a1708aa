"""Exact arithmetic over Q and Q(i), and exact dense linear algebra."""

from .kernels import backend_name, compiled_available, set_backend, using_backend
from .matrix import ExactMatrix, matmul, nullspace, rank, rref
from .scalars import (
    FIELDS,
    GaussianRational,
    I,
    Scalar,
    ScalarDivisionError,
    ScalarParseError,
    format_scalar,
    is_gaussian,
    normalize,
    parse_scalar,
    scalar_arith,
)

__all__ = [
    "ExactMatrix", "FIELDS", "GaussianRational", "I", "Scalar", "ScalarDivisionError",
    "ScalarParseError", "backend_name", "compiled_available", "format_scalar", "is_gaussian",
    "matmul", "normalize", "nullspace", "parse_scalar", "rank", "rref", "scalar_arith",
    "set_backend", "using_backend",
]
