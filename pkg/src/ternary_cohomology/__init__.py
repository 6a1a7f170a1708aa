"""Exact cohomology of ternary algebras of associative type."""

from __future__ import annotations

from .algebras import (Algebra, AlgebraFormatError, BinaryAlgebra, IdentityKind, TernaryAlgebra,
                       builtin_example, check_identity, load_algebra, loads_algebra)
from .cochain import Cochain, Theory, coboundary, cohomology, derivations
from .nogo import Case, solve
from .takhtajan import assoc_type_analysis, induced_binary, lift_cochain, recovery_check

__version__ = "0.1.0"

__all__ = [
    "Algebra", "AlgebraFormatError", "BinaryAlgebra", "Case", "Cochain", "IdentityKind",
    "TernaryAlgebra", "Theory", "assoc_type_analysis", "builtin_example", "check_identity",
    "coboundary", "cohomology", "derivations", "induced_binary", "lift_cochain", "load_algebra",
    "loads_algebra", "recovery_check", "solve",
]
