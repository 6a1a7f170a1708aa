"""Cochains, coboundary operators and cohomology dimensions.

Grading: ``δᵖ`` takes a (p-1)-cochain to a p-cochain.  A ternary
p-cochain is a map ``V^{⊗2p+1} -> V``, a binary one ``V^{⊗p+1} -> V``.
Every coboundary is written once as a :mod:`freeterm` template in an
opaque symbol ``f``; the template is then either evaluated on tables or
turned into a matrix by index bookkeeping.  The two routes share no
numeric code, which makes them cross-checks of each other.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from . import freeterm as ft
from . import tables
from .algebras import Algebra, IdentityKind, check_identity
from .exactmath import ExactMatrix, nullspace, rank
from .exactmath.scalars import ScalarParseError, format_scalar, normalize, parse_scalar


class CoboundaryUndefined(ValueError):
    """The requested coboundary does not exist for this theory and degree."""


class PreconditionError(ValueError):
    """The algebra does not satisfy the identity the theory is built on."""


class Theory(enum.Enum):
    TernaryPartial = "partial"
    TernaryWeak = "weak"
    TernaryAlt1 = "alt1"
    TernaryAlt2 = "alt2"
    BinaryAssociative = "assoc"
    BinarySkew = "skew"

    @property
    def arity(self) -> int:
        return 2 if self.name.startswith("Binary") else 3

    @property
    def op(self) -> str:
        return "mu" if self.arity == 2 else "m"

    @property
    def max_degree(self) -> int | None:
        """Largest p with δᵖ defined; ``None`` means unbounded."""
        return None if self in (Theory.TernaryWeak, Theory.BinaryAssociative) else 2

    @property
    def identity(self) -> IdentityKind:
        return {
            Theory.TernaryPartial: IdentityKind.PartiallyAssociative,
            Theory.TernaryWeak: IdentityKind.WeakTotallyAssociative,
            Theory.TernaryAlt1: IdentityKind.AlternateFirstKind,
            Theory.TernaryAlt2: IdentityKind.AlternateSecondKind,
            Theory.BinaryAssociative: IdentityKind.BinaryAssociative,
            Theory.BinarySkew: IdentityKind.BinarySkewAssociative,
        }[self]

    @property
    def rule(self) -> ft.RewriteRule:
        return {
            Theory.TernaryPartial: ft.PARTIAL_TERNARY,
            Theory.TernaryWeak: ft.WEAK_TERNARY,
            Theory.TernaryAlt1: ft.ALT1_TERNARY,
            Theory.TernaryAlt2: ft.ALT2_TERNARY,
            Theory.BinaryAssociative: ft.ASSOC_BINARY,
            Theory.BinarySkew: ft.SKEW_BINARY,
        }[self]

    def inputs(self, p: int) -> int:
        """Number of arguments of a p-cochain."""
        return 2 * p + 1 if self.arity == 3 else p + 1

    @classmethod
    def parse(cls, text: str | Theory) -> Theory:
        if isinstance(text, Theory):
            return text
        key = text.strip().lower().replace("_", "-")
        for t in cls:
            if key in (t.value, t.name.lower()):
                return t
        alias = {
            "ternary-partial": cls.TernaryPartial, "ternary-weak": cls.TernaryWeak,
            "ternary-alt1": cls.TernaryAlt1, "ternary-alt2": cls.TernaryAlt2,
            "binary-skew": cls.BinarySkew, "binary-associative": cls.BinaryAssociative,
            "associative": cls.BinaryAssociative, "hochschild": cls.BinaryAssociative,
        }.get(key)
        if alias is None:
            raise ValueError(f"unknown theory {text!r}")
        return alias

    def check_degree(self, p: int) -> None:
        if p < 1:
            raise CoboundaryUndefined(f"coboundaries start at p=1, got p={p}")
        if self.max_degree is not None and p > self.max_degree:
            raise CoboundaryUndefined(
                f"{self.name} has no coboundary δ^{p}; it stops at δ^{self.max_degree}")


# ---------------------------------------------------------------- cochains

@dataclass(frozen=True, eq=False)
class Cochain:
    theory: Theory
    degree: int
    dim: int
    table: np.ndarray

    def __post_init__(self):
        if self.degree < 0 or self.dim < 1:
            raise ValueError("degree must be >= 0 and dim >= 1")
        t = np.array(self.table, dtype=object)
        expected = (self.dim,) * (self.theory.inputs(self.degree) + 1)
        if t.shape != expected:
            raise ValueError(f"{self.theory.name} {self.degree}-cochain on dim {self.dim} "
                             f"needs shape {expected}, got {t.shape}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def inputs(self) -> int:
        return self.theory.inputs(self.degree)

    @property
    def size(self) -> int:
        return self.dim ** (self.inputs + 1)

    @classmethod
    def zero(cls, theory: Theory, degree: int, dim: int) -> Cochain:
        return cls(theory, degree, dim, tables.zeros(dim, theory.inputs(degree)))

    @classmethod
    def identity(cls, theory: Theory, dim: int) -> Cochain:
        return cls(theory, 0, dim, tables.identity(dim))

    @classmethod
    def of_algebra(cls, alg: Algebra, theory: Theory) -> Cochain:
        """The product itself, as a 1-cochain."""
        if alg.arity != theory.arity:
            raise ValueError(f"{theory.name} needs an algebra of arity {theory.arity}")
        return cls(theory, 1, alg.dim, alg.table)

    @classmethod
    def from_vector(cls, theory: Theory, degree: int, dim: int, vector: Sequence) -> Cochain:
        shape = (dim,) * (theory.inputs(degree) + 1)
        arr = np.empty(len(vector), dtype=object)
        for i, v in enumerate(vector):
            arr[i] = normalize(v)
        return cls(theory, degree, dim, arr.reshape(shape))

    @classmethod
    def basis(cls, theory: Theory, degree: int, dim: int) -> Iterator[Cochain]:
        size = dim ** (theory.inputs(degree) + 1)
        for j in range(size):
            v = [0] * size
            v[j] = 1
            yield cls.from_vector(theory, degree, dim, v)

    def vector(self) -> list:
        return [normalize(v) for v in self.table.reshape(-1)]

    def is_zero(self) -> bool:
        return tables.is_zero(self.table)

    def _same(self, other: Cochain) -> None:
        if (self.theory.arity, self.degree, self.dim) != (other.theory.arity, other.degree, other.dim):
            raise ValueError("cochains live in different spaces")

    def __add__(self, other: Cochain) -> Cochain:
        self._same(other)
        return Cochain(self.theory, self.degree, self.dim, self.table + other.table)

    def __sub__(self, other: Cochain) -> Cochain:
        self._same(other)
        return Cochain(self.theory, self.degree, self.dim, self.table - other.table)

    def __neg__(self) -> Cochain:
        return Cochain(self.theory, self.degree, self.dim, -self.table)

    def scale(self, k) -> Cochain:
        return Cochain(self.theory, self.degree, self.dim, self.table * k)

    def __rmul__(self, k) -> Cochain:
        return self.scale(k)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.theory.arity == other.theory.arity
                and self.degree == other.degree and self.dim == other.dim
                and tables.equal(self.table, other.table))

    __hash__ = None

    def value(self, *indices: int) -> list:
        """Output vector on basis inputs (0-based)."""
        return [normalize(v) for v in self.table[tuple(indices)]]

    def to_document(self) -> dict:
        entries = [{"inputs": [i + 1 for i in idx[:-1]], "output": idx[-1] + 1, "c": format_scalar(c)}
                   for idx, c in tables.sparse_items(self.table)]
        return {"theory": self.theory.value, "degree": self.degree, "dim": self.dim,
                "entries": entries}

    @classmethod
    def from_document(cls, doc: dict, field: str = "Q(i)") -> Cochain:
        try:
            theory = Theory.parse(doc["theory"])
            degree, dim = int(doc["degree"]), int(doc["dim"])
            t = tables.zeros(dim, theory.inputs(degree))
            seen = set()
            for pos, rec in enumerate(doc["entries"]):
                key = tuple(i - 1 for i in rec["inputs"]) + (rec["output"] - 1,)
                if len(key) != t.ndim or any(not 0 <= i < dim for i in key):
                    raise ValueError(f"entries[{pos}]: bad index {rec}")
                if key in seen:
                    raise ValueError(f"entries[{pos}]: duplicate index")
                seen.add(key)
                t[key] = parse_scalar(str(rec["c"]), field)
        except (KeyError, TypeError, ScalarParseError) as exc:
            raise ValueError(f"malformed cochain document: {exc}") from None
        return cls(theory, degree, dim, t)


def circle(phi: Cochain, psi: Cochain) -> Cochain:
    """φ∘ψ: sum of the insertions of ψ into every argument of φ."""
    if phi.dim != psi.dim or phi.theory.arity != psi.theory.arity:
        raise ValueError("circle needs cochains of one family on one space")
    total = None
    for slot in range(phi.inputs):
        term = tables.insert(phi.table, psi.table, slot)
        total = term if total is None else total + term
    return Cochain(phi.theory, phi.degree + psi.degree, phi.dim, total)


# ---------------------------------------------------------------- templates

F = "f"


def _elem(outer: str, outer_arity: int, pos: int, inner: str, inner_arity: int) -> ft.Term:
    return ft.elementary(outer, outer_arity, pos, inner, inner_arity)


def coboundary_template(theory: Theory | str, p: int, symbol: str = F) -> ft.LinearForm:
    """δᵖ as a linear form in the cochain symbol (a (p-1)-cochain)."""
    theory = Theory.parse(theory)
    theory.check_degree(p)
    op = theory.op
    a = theory.inputs(p - 1)
    terms: list[tuple[ft.Term, int]] = []
    if theory.arity == 3 and p == 1 and theory is not Theory.TernaryWeak:
        terms.append((_elem(symbol, 1, 0, op, 3), 1))
        terms += [(_elem(op, 3, k, symbol, 1), -1) for k in range(3)]
    elif theory is Theory.TernaryWeak and p == 1:
        terms += [(_elem(op, 3, k, symbol, 1), 1) for k in range(3)]
        terms.append((_elem(symbol, 1, 0, op, 3), -1))
    elif theory.arity == 3 and p == 2 and theory is not Theory.TernaryWeak:
        signs = {Theory.TernaryPartial: (1, 1, 1), Theory.TernaryAlt1: (1, -1, 1),
                 Theory.TernaryAlt2: (1, -1, -1)}[theory]
        for k, sg in enumerate(signs):
            terms.append((_elem(op, 3, k, symbol, 3), sg))
            terms.append((_elem(symbol, 3, k, op, 3), sg))
    elif theory is Theory.TernaryWeak:
        return weak_general_template(p, symbol)
    elif theory is Theory.BinarySkew and p == 1:
        terms.append((_elem(symbol, 1, 0, op, 2), 1))
        terms += [(_elem(op, 2, k, symbol, 1), -1) for k in range(2)]
    elif theory is Theory.BinarySkew:
        for k in range(2):
            terms.append((_elem(op, 2, k, symbol, 2), 1))
            terms.append((_elem(symbol, 2, k, op, 2), 1))
    else:  # Hochschild
        terms.append((_elem(op, 2, 1, symbol, a), 1))
        terms += [(_elem(symbol, a, i - 1, op, 2), (-1) ** i) for i in range(1, a + 1)]
        terms.append((_elem(op, 2, 0, symbol, a), (-1) ** (a + 1)))
    return ft.LinearForm(terms)


def weak_general_template(p: int, symbol: str = F) -> ft.LinearForm:
    """The alternating weak formula, also at p = 1 where δ¹ proper has four terms."""
    if p < 1:
        raise CoboundaryUndefined("p must be positive")
    a = 2 * p - 1
    terms = [(_elem("m", 3, 2, symbol, a), 1)]
    terms += [(_elem(symbol, a, 2 * i - 2, "m", 3), (-1) ** i) for i in range(1, p + 1)]
    terms.append((_elem("m", 3, 0, symbol, a), (-1) ** (p + 1)))
    return ft.LinearForm(terms)


def evaluate_term(term: ft.Term, symbol_tables: dict[str, np.ndarray]) -> np.ndarray:
    """Coefficient table of a term, given a table for every node symbol."""
    if term.is_leaf:
        raise ValueError("a bare variable has no table")
    t = symbol_tables[term.head]
    if tables.inputs(t) != term.arity:
        raise ValueError(f"symbol {term.head} has {tables.inputs(t)} inputs, used with {term.arity}")
    for slot in reversed(range(term.arity)):
        arg = term.args[slot]
        if not arg.is_leaf:
            t = tables.insert(t, evaluate_term(arg, symbol_tables), slot)
    return t


def evaluate(form: ft.LinearForm, symbol_tables: dict[str, np.ndarray]) -> np.ndarray:
    """Coefficient table of a linear form (all terms must have the same variable count)."""
    total = None
    for term, c in form.items():
        t = evaluate_term(term, symbol_tables)
        t = t * c if c != 1 else t
        total = t if total is None else total + t
    if total is None:
        raise ValueError("cannot size the table of an empty form")
    return tables.tidy(total)


def _elementary_shape(term: ft.Term, symbol: str):
    """Classify ``symbol∘_j op`` / ``op∘_k symbol`` templates."""
    inner = [(k, a) for k, a in enumerate(term.args) if not a.is_leaf]
    if len(inner) != 1 or any(not x.is_leaf for x in inner[0][1].args):
        raise ValueError(f"{term} is not an elementary composition")
    k, sub = inner[0]
    if term.head == symbol:
        return "outer", k, sub.head, sub.arity
    if sub.head == symbol:
        return "inner", k, term.head, sub.arity
    raise ValueError(f"{term} does not contain {symbol}")


MAX_MATRIX_ENTRIES = int(os.environ.get("TERNCOH_MAX_ENTRIES", 1 << 24))


def template_matrix(form: ft.LinearForm, op_tables: dict[str, np.ndarray], n: int,
                    symbol: str = F) -> ExactMatrix:
    """Matrix of ``f -> form(f)`` on flattened tables (output index last, C order).

    Built by index bookkeeping on the structure constants alone; it never
    evaluates the form on a cochain.
    """
    items = list(form.items())
    if not items:
        raise ValueError("empty template")
    shapes = [(_elementary_shape(t, symbol), c) for t, c in items]
    N = items[0][0].nleaves
    first = shapes[0][0]
    f_inputs = (N - first[3] + 1) if first[0] == "outer" else first[3]
    rows, cols = n ** (N + 1), n ** (f_inputs + 1)
    if rows * cols > MAX_MATRIX_ENTRIES:
        raise MemoryError(f"{rows}x{cols} matrix exceeds the limit of "
                          f"{MAX_MATRIX_ENTRIES} entries (TERNCOH_MAX_ENTRIES)")
    weights = [n ** e for e in range(f_inputs, -1, -1)]

    def flat(idx: Sequence[int]) -> int:
        return sum(i * w for i, w in zip(idx, weights))

    acc: dict[tuple[int, int], object] = {}
    for (kind, pos, op, r), c in shapes:
        C = op_tables[op]
        for I in product(range(n), repeat=N):
            base_row = flat_index(I, n) * n
            if kind == "outer":
                # f(.., op(I[pos:pos+r]), ..)
                head, tail = I[:pos], I[pos + r:]
                sub = C[I[pos:pos + r]]
                for t in range(n):
                    v = sub[t]
                    if v == 0:
                        continue
                    col0 = flat(head + (t,) + tail + (0,))
                    for s in range(n):
                        key = (base_row + s, col0 + s)
                        acc[key] = acc.get(key, 0) + c * v
            else:
                # op(.., f(I[pos:pos+r]), ..)
                col0 = flat(I[pos:pos + r] + (0,))
                left, right = I[:pos], I[pos + r:]
                for t in range(n):
                    out = C[left + (t,) + right]
                    for s in range(n):
                        v = out[s]
                        if v != 0:
                            key = (base_row + s, col0 + t)
                            acc[key] = acc.get(key, 0) + c * v
    return ExactMatrix.from_sparse(rows, cols, acc)


def flat_index(idx: Sequence[int], n: int) -> int:
    out = 0
    for i in idx:
        out = out * n + i
    return out


# ---------------------------------------------------------------- operators

def _require(alg: Algebra, theory: Theory, check: bool) -> None:
    if alg.arity != theory.arity:
        raise ValueError(f"{theory.name} needs an algebra of arity {theory.arity}")
    if check:
        report = check_identity(alg, theory.identity)
        if not report.holds:
            raise PreconditionError(
                f"algebra is not {theory.identity.name} "
                f"(fails at {[i + 1 for i in report.counterexample]})")


def coboundary(alg: Algebra, theory: Theory | str, f: Cochain, p: int | None = None,
               check: bool = False) -> Cochain:
    """δᵖ f for a (p-1)-cochain f; p defaults to ``f.degree + 1``."""
    theory = Theory.parse(theory)
    _require(alg, theory, check)
    if f.theory.arity != theory.arity or f.dim != alg.dim:
        raise ValueError("cochain does not match the algebra")
    if p is None:
        p = f.degree + 1
    if f.degree != p - 1:
        raise ValueError(f"δ^{p} takes a {p - 1}-cochain, got degree {f.degree}")
    form = coboundary_template(theory, p)
    out = evaluate(form, {theory.op: alg.table, F: f.table})
    return Cochain(theory, p, alg.dim, out)


def delta_partial(alg: Algebra, f: Cochain, check: bool = False) -> Cochain:
    if f.degree > 1:
        raise CoboundaryUndefined("partially associative algebras have no δ^3")
    return coboundary(alg, Theory.TernaryPartial, f, check=check)


def delta_weak(alg: Algebra, f: Cochain, p: int | None = None, check: bool = False) -> Cochain:
    return coboundary(alg, Theory.TernaryWeak, f, p, check=check)


def delta_alt(alg: Algebra, f: Cochain, kind: int = 1, check: bool = False) -> Cochain:
    theory = Theory.TernaryAlt1 if kind == 1 else Theory.TernaryAlt2
    if f.degree > 1:
        raise CoboundaryUndefined("alternate partially associative algebras have no δ^3")
    return coboundary(alg, theory, f, check=check)


def delta_skew(alg: Algebra, f: Cochain, check: bool = False) -> Cochain:
    if f.degree > 1:
        raise CoboundaryUndefined("skew-associative algebras have no δ^3")
    return coboundary(alg, Theory.BinarySkew, f, check=check)


def hochschild(alg: Algebra, f: Cochain, check: bool = False) -> Cochain:
    """Standard Hochschild coboundary d: degree p -> p+1 (binary grading)."""
    return coboundary(alg, Theory.BinaryAssociative, f, check=check)


def matrixize(alg: Algebra, theory: Theory | str, p: int) -> ExactMatrix:
    """Matrix of δᵖ: C^{p-1} -> C^p in the lexicographic table bases."""
    theory = Theory.parse(theory)
    _require(alg, theory, False)
    return template_matrix(coboundary_template(theory, p), {theory.op: alg.table}, alg.dim)


@dataclass(frozen=True)
class CohomologyReport:
    theory: Theory
    p: int
    dim_cochains: int
    dim_cocycles: int
    dim_coboundaries: int

    @property
    def dim_H(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries

    def to_dict(self) -> dict:
        return {"theory": self.theory.value, "p": self.p, "dim_cochains": self.dim_cochains,
                "dim_Z": self.dim_cocycles, "dim_B": self.dim_coboundaries, "dim_H": self.dim_H}


def cohomology(alg: Algebra, theory: Theory | str, p: int, check: bool = False) -> CohomologyReport:
    """``Hᵖ = ker δᵖ / im δᵖ⁻¹`` (both inside the (p-1)-cochains); ``B¹ = 0``."""
    theory = Theory.parse(theory)
    _require(alg, theory, check)
    theory.check_degree(p)
    M = matrixize(alg, theory, p)
    z = M.cols - rank(M)
    b = rank(matrixize(alg, theory, p - 1)) if p > 1 else 0
    if b > z:
        raise ArithmeticError("image exceeds kernel: the operators do not form a complex here")
    return CohomologyReport(theory, p, M.cols, z, b)


def derivations(alg: Algebra, theory: Theory | str | None = None) -> list[Cochain]:
    """Basis of the derivations ``ker δ¹`` as maps V -> V."""
    if theory is None:
        theory = Theory.TernaryPartial if alg.arity == 3 else Theory.BinaryAssociative
    theory = Theory.parse(theory)
    M = matrixize(alg, theory, 1)
    return [Cochain.from_vector(theory, 0, alg.dim, v) for v in nullspace(M)]


def complex_defect(alg: Algebra, theory: Theory | str, p: int) -> ExactMatrix:
    """δ^{p+1} δ^p as a matrix; zero exactly when the pair composes to 0."""
    theory = Theory.parse(theory)
    return matrixize(alg, theory, p + 1) @ matrixize(alg, theory, p)
