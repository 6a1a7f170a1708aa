"""Ansatz search for a third coboundary operator.

A candidate δ³ is a linear combination, with unknown coefficients, of the
elementary ways to place one operation and one cochain symbol.  Requiring
``δ³(δ²g) = 0`` in the free algebra modulo the defining identity gives a
linear system on the coefficients; a zero nullspace means no δ³ exists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from . import freeterm as ft
from .cochain import Theory, coboundary_template
from .exactmath import ExactMatrix, nullspace, rank
from .exactmath.scalars import format_scalar


class Case(enum.Enum):
    TernaryPartial = "ternary-partial"
    TernaryAlt1 = "ternary-alt1"
    TernaryAlt2 = "ternary-alt2"
    BinarySkew = "binary-skew"
    TernaryWeak = "ternary-weak"
    BinaryAssociative = "binary-assoc"

    @property
    def theory(self) -> Theory:
        return Theory[self.name]

    @property
    def arity(self) -> int:
        return self.theory.arity

    @classmethod
    def parse(cls, text: str | Case) -> Case:
        if isinstance(text, Case):
            return text
        key = text.strip().lower().replace("_", "-")
        for c in cls:
            if key in (c.value, c.name.lower()):
                return c
        raise ValueError(f"unknown case {text!r}; choose from {[c.value for c in cls]}")


@dataclass(frozen=True)
class Ansatz:
    case: Case
    patterns: tuple[ft.Term, ...]

    @property
    def names(self) -> list[str]:
        return [f"a{i + 1}" for i in range(len(self.patterns))]

    def form(self, coefficients) -> ft.LinearForm:
        return ft.LinearForm(zip(self.patterns, coefficients))

    def describe(self) -> list[str]:
        return [f"{name} {t}" for name, t in zip(self.names, self.patterns)]


def build_ansatz(case: Case | str, symbol: str = "f") -> Ansatz:
    """The elementary placements of one operation node and one cochain node.

    Ternary: ``m`` with the 5-ary symbol in each slot, then the symbol with
    ``m`` in each of its five slots (7 variables).  Binary: ``mu(x, f)``,
    ``f`` with ``mu`` in each slot, then ``mu(f, x)`` (4 variables).
    """
    case = Case.parse(case)
    if case.arity == 3:
        pats = [ft.elementary("m", 3, k, symbol, 5) for k in (2, 1, 0)]
        pats += [ft.elementary(symbol, 5, k, "m", 3) for k in range(5)]
    else:
        pats = [ft.elementary("mu", 2, 1, symbol, 3)]
        pats += [ft.elementary(symbol, 3, k, "mu", 2) for k in range(3)]
        pats.append(ft.elementary("mu", 2, 0, symbol, 3))
    return Ansatz(case, tuple(pats))


def combination_text(coeffs, names) -> str:
    parts = []
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        mag = abs(c)
        body = name if mag == 1 else f"{format_scalar(mag)}{name}"
        parts.append(("- " if c < 0 else "+ ") + body)
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass(frozen=True)
class ConstraintSystem:
    ansatz: Ansatz
    rows: tuple[tuple[ft.Term, tuple], ...]

    @property
    def names(self) -> list[str]:
        return self.ansatz.names

    @property
    def matrix(self) -> ExactMatrix:
        return ExactMatrix.from_rows([c for _, c in self.rows], len(self.names))

    def combinations(self) -> list[str]:
        return [combination_text(c, self.names) for _, c in self.rows]

    def pretty(self) -> list[str]:
        return [f"({combination_text(c, self.names)}) {t}" for t, c in self.rows]


def _composed(case: Case, ansatz: Ansatz, index: int) -> ft.LinearForm:
    inner = coboundary_template(case.theory, 2, symbol="g")
    outer = ft.LinearForm.of(ansatz.patterns[index])
    return ft.normalize(ft.compose(outer, inner, "f"), case.theory.rule)


def derive_constraints(case: Case | str) -> ConstraintSystem:
    """One row per basis term of the normalized composition δ³(δ²g)."""
    case = Case.parse(case)
    ansatz = build_ansatz(case)
    k = len(ansatz.patterns)
    coeffs: dict[ft.Term, list] = {}
    for i in range(k):
        for term, c in _composed(case, ansatz, i).items():
            coeffs.setdefault(term, [0] * k)[i] = c
    rows = tuple((t, tuple(coeffs[t])) for t in sorted(coeffs) if any(coeffs[t]))
    return ConstraintSystem(ansatz, rows)


def substitute(case: Case | str, coefficients) -> ft.LinearForm:
    """Normalized δ³(δ²g) for the ansatz with the given coefficient values."""
    case = Case.parse(case)
    ansatz = build_ansatz(case)
    inner = coboundary_template(case.theory, 2, symbol="g")
    return ft.normalize(ft.compose(ansatz.form(coefficients), inner, "f"), case.theory.rule)


@dataclass(frozen=True)
class Verdict:
    system: ConstraintSystem
    basis: tuple[tuple, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def exists(self) -> bool:
        return self.dimension > 0

    @property
    def text(self) -> str:
        if self.exists:
            return f"a δ³ exists: {self.dimension}-dimensional solution space"
        return "no δ³ exists: every ansatz coefficient is forced to 0"

    def contains(self, vector) -> bool:
        """Whether ``vector`` lies in the solution space."""
        M = self.system.matrix
        return all(v == 0 for v in M.apply([Fraction(x) for x in vector]))

    def to_dict(self) -> dict:
        sys = self.system
        return {
            "case": sys.ansatz.case.value,
            "ansatz": sys.ansatz.describe(),
            "constraints": [{"term": str(t), "combination": combination_text(c, sys.names)}
                            for t, c in sys.rows],
            "matrix": sys.matrix.to_strings(),
            "rank": rank(sys.matrix),
            "nullspace_dimension": self.dimension,
            "nullspace_basis": [[format_scalar(x) for x in v] for v in self.basis],
            "verdict": self.text,
        }


def solve(case: Case | str) -> Verdict:
    system = derive_constraints(case)
    return Verdict(system, tuple(tuple(v) for v in nullspace(system.matrix)))


WEAK_PATTERN = (1, 0, 1, -1, 0, 1, 0, -1)
