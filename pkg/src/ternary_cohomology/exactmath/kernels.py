"""Backend selection for the integer elimination kernels.

The compiled Cython module is used when it imports; otherwise the
pure-Python fallback.  ``TERNCOH_KERNEL=python`` forces the fallback.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

_active = _fallback
if _compiled is not None and os.environ.get("TERNCOH_KERNEL", "").lower() != "python":
    _active = _compiled


def backend_name() -> str:
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def compiled_available() -> bool:
    return _compiled is not None


def set_backend(name: str) -> None:
    global _active
    try:
        _active = BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


@contextmanager
def using_backend(name: str):
    previous = backend_name()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def echelon(rows, ncols: int, reduced: bool = False):
    return _active.echelon(rows, ncols, reduced)


def matmul(a_rows, b_rows, ncols: int):
    return _active.matmul(a_rows, b_rows, ncols)
