"""Pure-Python integer kernels.

Same contract as the compiled ``_kernels`` module: rows are lists of Python
ints, results are plain lists.  The compiled module defers to these
functions whenever a value leaves the int64 range.
"""

from __future__ import annotations

from math import gcd


def _primitive(row: list[int]) -> list[int]:
    g = gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def echelon(rows, ncols: int, reduced: bool):
    """Fraction-free row echelon form of an integer matrix.

    Each elimination step replaces ``r`` by ``p*r - e*pivot_row`` and divides
    by the row content, so entries stay primitive.  Pivots are chosen with
    the smallest absolute value (first such row on ties) and made positive.

    Returns ``(pivot_columns, pivot_rows)``.  With ``reduced=True`` every
    pivot column is zero outside its pivot row (integer RREF up to row
    scaling).
    """
    remaining = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    out: list[list[int]] = []
    for c in range(ncols):
        if not remaining:
            break
        best = -1
        best_abs = 0
        for idx, r in enumerate(remaining):
            v = r[c]
            if v:
                a = v if v > 0 else -v
                if best < 0 or a < best_abs:
                    best, best_abs = idx, a
                    if a == 1:
                        break
        if best < 0:
            continue
        prow = remaining.pop(best)
        if prow[c] < 0:
            prow = [-x for x in prow]
        p = prow[c]
        survivors = []
        for r in remaining:
            e = r[c]
            if e:
                r = _primitive([p * a - e * b for a, b in zip(r, prow)])
                if any(r):
                    survivors.append(r)
            else:
                survivors.append(r)
        remaining = survivors
        if reduced:
            for k, r in enumerate(out):
                e = r[c]
                if e:
                    out[k] = _primitive([p * a - e * b for a, b in zip(r, prow)])
        pivots.append(c)
        out.append(prow)
    return pivots, out


def matmul(a_rows, b_rows, ncols: int):
    """Integer matrix product, skipping zero entries of the left factor."""
    result = []
    for row in a_rows:
        acc = [0] * ncols
        for k, a in enumerate(row):
            if a:
                brow = b_rows[k]
                acc = [x + a * y for x, y in zip(acc, brow)]
        result.append(acc)
    return result
