# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels (int64 fast path).

Mirrors ``_fallback`` exactly.  Every multiply/subtract is overflow-checked;
on overflow, or when an input does not fit in int64, the call is re-run
through the pure-Python big-integer implementation.
"""

from libc.stdlib cimport malloc, calloc, free

from . import _fallback

cdef extern from *:
    """
    static inline int tc_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int tc_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int tc_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int tc_mul_ovf(long long a, long long b, long long *r) nogil
    int tc_sub_ovf(long long a, long long b, long long *r) nogil
    int tc_add_ovf(long long a, long long b, long long *r) nogil

# keep |x| well inside int64 so negation never overflows
cdef long long LIMIT = 4611686018427387904  # 2**62


cdef inline long long _abs(long long x) nogil:
    return -x if x < 0 else x


cdef inline long long _gcd(long long a, long long b) nogil:
    cdef long long t
    a = _abs(a)
    b = _abs(b)
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int _load(list rows, Py_ssize_t ncols, long long *buf) except -1:
    cdef Py_ssize_t i, j
    cdef list row
    cdef object v
    for i in range(len(rows)):
        row = rows[i]
        for j in range(ncols):
            v = row[j]
            if v >= LIMIT or v <= -LIMIT:
                return 1
            buf[i * ncols + j] = v
    return 0


cdef int _combine(long long *r, long long *prow, long long p, long long e,
                  Py_ssize_t start, Py_ssize_t ncols) nogil:
    """r <- primitive(p*r - e*prow) on columns >= start; 1 on overflow."""
    cdef Py_ssize_t j
    cdef long long a, b, g = 0
    for j in range(start, ncols):
        if tc_mul_ovf(p, r[j], &a):
            return 1
        if tc_mul_ovf(e, prow[j], &b):
            return 1
        if tc_sub_ovf(a, b, &a):
            return 1
        if a >= LIMIT or a <= -LIMIT:
            return 1
        r[j] = a
        if g != 1 and a != 0:
            g = _gcd(g, a)
    if g > 1:
        for j in range(start, ncols):
            r[j] = r[j] // g
    return 0


cdef int _row_is_zero(long long *r, Py_ssize_t ncols) nogil:
    cdef Py_ssize_t j
    for j in range(ncols):
        if r[j] != 0:
            return 0
    return 1


def echelon(rows, Py_ssize_t ncols, bint reduced):
    """See ``_fallback.echelon``; identical results."""
    cdef list src = [list(row) for row in rows if any(row)]
    cdef Py_ssize_t nrows = len(src)
    if nrows == 0 or ncols == 0:
        return [], []
    cdef long long *buf = <long long *> malloc(nrows * ncols * sizeof(long long))
    cdef Py_ssize_t *pivcols = <Py_ssize_t *> malloc(nrows * sizeof(Py_ssize_t))
    cdef Py_ssize_t *order = <Py_ssize_t *> malloc(nrows * sizeof(Py_ssize_t))
    cdef Py_ssize_t *rem = <Py_ssize_t *> malloc(nrows * sizeof(Py_ssize_t))
    cdef Py_ssize_t npiv = 0, nrem, c, k, i, j, best, start
    cdef long long v, a, best_abs, p, e
    cdef long long *prow
    cdef long long *r
    cdef int overflow = 0
    try:
        if buf == NULL or pivcols == NULL or order == NULL or rem == NULL:
            raise MemoryError()
        if _load(src, ncols, buf):
            return _fallback.echelon(src, ncols, reduced)
        # remaining rows kept in original order, like the list in _fallback
        nrem = nrows
        for i in range(nrows):
            rem[i] = i
        with nogil:
            for c in range(ncols):
                if nrem == 0:
                    break
                best = -1
                best_abs = 0
                for k in range(nrem):
                    v = buf[rem[k] * ncols + c]
                    if v != 0:
                        a = _abs(v)
                        if best < 0 or a < best_abs:
                            best = k
                            best_abs = a
                            if a == 1:
                                break
                if best < 0:
                    continue
                i = rem[best]
                for k in range(best, nrem - 1):
                    rem[k] = rem[k + 1]
                nrem -= 1
                prow = buf + i * ncols
                if prow[c] < 0:
                    for j in range(ncols):
                        prow[j] = -prow[j]
                p = prow[c]
                j = 0
                for k in range(nrem):
                    r = buf + rem[k] * ncols
                    e = r[c]
                    if e != 0:
                        if _combine(r, prow, p, e, 0, ncols):
                            overflow = 1
                            break
                        if _row_is_zero(r, ncols):
                            continue
                    rem[j] = rem[k]
                    j += 1
                if overflow:
                    break
                nrem = j
                if reduced:
                    for k in range(npiv):
                        r = buf + order[k] * ncols
                        e = r[c]
                        if e != 0:
                            if _combine(r, prow, p, e, 0, ncols):
                                overflow = 1
                                break
                    if overflow:
                        break
                order[npiv] = i
                pivcols[npiv] = c
                npiv += 1
        if overflow:
            return _fallback.echelon(src, ncols, reduced)
        pivots = [pivcols[k] for k in range(npiv)]
        out = []
        for k in range(npiv):
            r = buf + order[k] * ncols
            out.append([r[j] for j in range(ncols)])
        return pivots, out
    finally:
        free(buf)
        free(pivcols)
        free(order)
        free(rem)


def matmul(a_rows, b_rows, Py_ssize_t ncols):
    """See ``_fallback.matmul``; identical results."""
    cdef list A = [list(row) for row in a_rows]
    cdef list B = [list(row) for row in b_rows]
    cdef Py_ssize_t m = len(A)
    cdef Py_ssize_t inner = len(B)
    if m == 0:
        return []
    if inner == 0 or ncols == 0:
        return [[0] * ncols for _ in range(m)]
    cdef long long *abuf = <long long *> malloc(m * inner * sizeof(long long))
    cdef long long *bbuf = <long long *> malloc(inner * ncols * sizeof(long long))
    cdef long long *cbuf = <long long *> calloc(m * ncols, sizeof(long long))
    cdef Py_ssize_t i, k, j
    cdef long long a, t
    cdef int overflow = 0
    try:
        if abuf == NULL or bbuf == NULL or cbuf == NULL:
            raise MemoryError()
        if _load(A, inner, abuf) or _load(B, ncols, bbuf):
            return _fallback.matmul(A, B, ncols)
        with nogil:
            for i in range(m):
                for k in range(inner):
                    a = abuf[i * inner + k]
                    if a == 0:
                        continue
                    for j in range(ncols):
                        if tc_mul_ovf(a, bbuf[k * ncols + j], &t) or \
                                tc_add_ovf(cbuf[i * ncols + j], t, &cbuf[i * ncols + j]):
                            overflow = 1
                            break
                    if overflow:
                        break
                if overflow:
                    break
        if overflow:
            return _fallback.matmul(A, B, ncols)
        return [[cbuf[i * ncols + j] for j in range(ncols)] for i in range(m)]
    finally:
        free(abuf)
        free(bbuf)
        free(cbuf)
