"""Dense multilinear coefficient tables.

A table for a map ``V^{⊗k} -> V`` on an ``n``-dimensional space is a numpy
object array of shape ``(n,)*(k+1)``; the last axis is the output index.
Entries are exact scalars (``int``, ``Fraction``, ``GaussianRational``).
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from .exactmath.scalars import normalize


def zeros(n: int, k: int) -> np.ndarray:
    """Zero table of a map with ``k`` inputs."""
    out = np.empty((n,) * (k + 1), dtype=object)
    out.fill(0)
    return out


def as_table(values, n: int, k: int) -> np.ndarray:
    arr = np.asarray(values, dtype=object)
    if arr.shape != (n,) * (k + 1):
        raise ValueError(f"expected shape {(n,) * (k + 1)}, got {arr.shape}")
    return arr


def identity(n: int) -> np.ndarray:
    out = zeros(n, 1)
    for i in range(n):
        out[i, i] = 1
    return out


def inputs(t: np.ndarray) -> int:
    return t.ndim - 1


def tidy(t: np.ndarray) -> np.ndarray:
    """Entrywise canonical scalars (integral fractions become ints)."""
    out = np.empty(t.shape, dtype=object)
    flat_in, flat_out = t.reshape(-1), out.reshape(-1)
    for idx, v in enumerate(flat_in):
        flat_out[idx] = normalize(v)
    return out


def insert(outer: np.ndarray, inner: np.ndarray, slot: int) -> np.ndarray:
    """Table of ``outer(.., inner(..), ..)`` with ``inner`` in input ``slot``."""
    a, b = inputs(outer), inputs(inner)
    if not 0 <= slot < a:
        raise ValueError(f"slot {slot} out of range for {a} inputs")
    prod = np.tensordot(inner, outer, axes=([b], [slot]))
    # axes now: inner inputs (b), outer inputs except slot (a-1), output
    perm = ([b + i for i in range(slot)] + list(range(b))
            + [b + i for i in range(slot, a - 1)] + [b + a - 1])
    return np.transpose(prod, perm)


def apply_outer(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Table of ``inner(..)`` pushed through the linear map ``outer: V -> V``."""
    return insert(outer, inner, 0)


def permute_inputs(t: np.ndarray, sigma: Sequence[int]) -> np.ndarray:
    """Table of ``x -> t(x[sigma[0]], .., x[sigma[k-1]])`` (0-based)."""
    k = inputs(t)
    inverse = [0] * k
    for pos, image in enumerate(sigma):
        inverse[image] = pos
    return np.transpose(t, inverse + [k])


def sign(sigma: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma)) if sigma[i] > sigma[j])
    return -1 if inv % 2 else 1


def signed_permutations(k: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    for sigma in permutations(range(k)):
        yield sign(sigma), sigma


def is_zero(t: np.ndarray) -> bool:
    return not any(v != 0 for v in t.reshape(-1))


def first_nonzero(t: np.ndarray) -> tuple[int, ...] | None:
    """Lexicographically first input tuple with a nonzero output vector."""
    k = inputs(t)
    flat = t.reshape(-1, t.shape[-1]) if t.ndim else t
    for row, vec in enumerate(flat):
        if any(v != 0 for v in vec):
            return tuple(int(x) for x in np.unravel_index(row, t.shape[:k]))
    return None


def sparse_items(t: np.ndarray) -> list[tuple[tuple[int, ...], object]]:
    """Nonzero ``(index_tuple, value)`` pairs in lexicographic order."""
    return [(tuple(int(i) for i in idx), normalize(v))
            for idx, v in np.ndenumerate(t) if v != 0]


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and is_zero(a - b)
