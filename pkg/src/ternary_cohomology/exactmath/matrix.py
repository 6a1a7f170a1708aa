"""Dense exact matrices and their rank / nullspace / product.

Rational matrices go through the integer kernels (rows are cleared of
denominators first; row scaling changes neither rank nor kernel).  Matrices
with genuinely complex entries use a plain Gauss-Jordan over Q(i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import kernels
from .scalars import GaussianRational, Scalar, format_scalar, normalize


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        e = [0] * (n * n)
        for i in range(n):
            e[i * n + i] = 1
        return cls(n, n, tuple(e))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> ExactMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(normalize(x) for r in rows for x in r))

    @classmethod
    def from_sparse(cls, rows: int, cols: int, items: dict) -> ExactMatrix:
        """Build from ``{(i, j): value}``; zero values are fine."""
        e = [0] * (rows * cols)
        for (i, j), v in items.items():
            e[i * cols + j] = normalize(v)
        return cls(rows, cols, tuple(e))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows,
                           tuple(self.entries[i * self.cols + j]
                                 for j in range(self.cols) for i in range(self.rows)))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def nnz(self) -> int:
        return sum(1 for x in self.entries if x)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        return matmul(self, other)

    def apply(self, vector: Sequence[Scalar]) -> list:
        if len(vector) != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            acc = 0
            for a, b in zip(self.row(i), vector):
                if a and b:
                    acc += a * b
            out.append(normalize(acc))
        return out

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x) for x in self.row(i)] for i in range(self.rows)]


def _has_complex(entries: Iterable) -> bool:
    return any(isinstance(x, GaussianRational) and x.im != 0 for x in entries)


def _real(x):
    return x.re if isinstance(x, GaussianRational) else x


def _integer_rows(M: ExactMatrix) -> tuple[list[list[int]], list[int]]:
    """Rows scaled to integers, plus the per-row denominators used."""
    rows, dens = [], []
    for i in range(M.rows):
        r = [_real(x) for x in M.row(i)]
        d = 1
        for x in r:
            if isinstance(x, Fraction) and x.denominator != 1:
                d = lcm(d, x.denominator)
        if d == 1:
            rows.append([int(x) for x in r])
        else:
            rows.append([int(x * d) for x in r])
        dens.append(d)
    return rows, dens


def _field_rref(M: ExactMatrix) -> tuple[list[int], list[list]]:
    """Gauss-Jordan over Q(i); pivot entries normalised to 1."""
    work = [[x for x in M.row(i)] for i in range(M.rows)]
    work = [r for r in work if any(r)]
    pivots: list[int] = []
    out: list[list] = []
    for c in range(M.cols):
        k = next((idx for idx, r in enumerate(work) if r[c]), None)
        if k is None:
            continue
        prow = work.pop(k)
        inv = 1 / GaussianRational._coerce(prow[c]) if isinstance(prow[c], GaussianRational) \
            else Fraction(1) / prow[c]
        prow = [normalize(x * inv) for x in prow]
        work = [[normalize(a - r[c] * b) for a, b in zip(r, prow)] if r[c] else r for r in work]
        work = [r for r in work if any(r)]
        out = [[normalize(a - r[c] * b) for a, b in zip(r, prow)] if r[c] else r for r in out]
        pivots.append(c)
        out.append(prow)
    return pivots, out


def rank(M: ExactMatrix) -> int:
    """Exact rank over Q (or Q(i) when complex entries are present)."""
    if M.rows == 0 or M.cols == 0:
        return 0
    if _has_complex(M.entries):
        return len(_field_rref(M)[0])
    rows, _ = _integer_rows(M)
    return len(kernels.echelon(rows, M.cols, False)[0])


def rref(M: ExactMatrix) -> tuple[list[int], list[tuple]]:
    """Reduced row echelon form: ``(pivot_columns, nonzero_rows)``."""
    if M.rows == 0 or M.cols == 0:
        return [], []
    if _has_complex(M.entries):
        pivots, rows = _field_rref(M)
        return pivots, [tuple(r) for r in rows]
    int_rows, _ = _integer_rows(M)
    pivots, rows = kernels.echelon(int_rows, M.cols, True)
    out = []
    for c, r in zip(pivots, rows):
        p = r[c]
        out.append(tuple(normalize(Fraction(x, p)) if x else 0 for x in r))
    return pivots, out


def nullspace(M: ExactMatrix) -> list[tuple]:
    """Canonical basis of ``{v : M v = 0}``.

    The basis vectors, stacked as rows, are in reduced row echelon form:
    leading entry 1, leading positions ascending.
    """
    pivots, rows = rref(M)
    pivot_set = set(pivots)
    free = [j for j in range(M.cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [0] * M.cols
        v[f] = 1
        for c, r in zip(pivots, rows):
            if r[f]:
                v[c] = normalize(-r[f])
        basis.append(v)
    if not basis:
        return []
    _, canon = rref(ExactMatrix.from_rows(basis, M.cols))
    return [tuple(r) for r in canon]


def matmul(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    if A.cols != B.rows:
        raise ValueError(f"shape mismatch {A.rows}x{A.cols} @ {B.rows}x{B.cols}")
    if _has_complex(A.entries) or _has_complex(B.entries):
        out = []
        bt = [B.column(j) for j in range(B.cols)]
        for i in range(A.rows):
            r = A.row(i)
            out.append([normalize(sum((a * b for a, b in zip(r, col) if a and b), 0)) for col in bt])
        return ExactMatrix.from_rows(out, B.cols) if out else ExactMatrix.zeros(0, B.cols)
    a_rows, a_dens = _integer_rows(A)
    b_rows, b_dens = _integer_rows(B)
    D = 1
    for d in b_dens:
        D = lcm(D, d)
    if D != 1:
        b_rows = [[x * (D // d) for x in r] for r, d in zip(b_rows, b_dens)]
    prod = kernels.matmul(a_rows, b_rows, B.cols)
    entries = []
    for r, d in zip(prod, a_dens):
        den = d * D
        if den == 1:
            entries.extend(int(x) for x in r)
        else:
            entries.extend(normalize(Fraction(x, den)) if x else 0 for x in r)
    return ExactMatrix(A.rows, B.cols, tuple(entries))
