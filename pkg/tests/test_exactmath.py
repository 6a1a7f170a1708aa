from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ternary_cohomology.exactmath import ExactMatrix, kernels, matmul, nullspace, rank, rref
from ternary_cohomology.exactmath.scalars import (I, GaussianRational, ScalarParseError, format_scalar,
                                                  normalize, parse_scalar)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)
gaussians = st.builds(lambda a, b: normalize(GaussianRational(a, b)), fractions, fractions)


def int_matrices(max_rows=7, max_cols=7, bound=4):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def to_sympy(M: ExactMatrix) -> sympy.Matrix:
    def conv(x):
        if isinstance(x, GaussianRational):
            return sympy.Rational(x.re) + sympy.I * sympy.Rational(x.im)
        return sympy.Rational(x)
    return sympy.Matrix(M.rows, M.cols, [conv(x) for x in M.entries])


class TestScalars:
    def test_formats(self):
        assert format_scalar(Fraction(-3, 4)) == "-3/4"
        assert format_scalar(5) == "5"
        assert format_scalar(I) == "0+1 i"
        assert format_scalar(GaussianRational(Fraction(1, 2), Fraction(-2, 3))) == "1/2-2/3 i"

    @pytest.mark.parametrize("text,value", [
        ("7", 7), ("-2/6", Fraction(-1, 3)), ("i", I), ("-i", -I),
        ("1/2+3/4 i", GaussianRational(Fraction(1, 2), Fraction(3, 4))), ("2 i", GaussianRational(0, 2)),
        ("0+0 i", 0),
    ])
    def test_parse(self, text, value):
        assert parse_scalar(text) == value

    @pytest.mark.parametrize("text", ["", "1/0", "abc", "1.5", "1//2", "++1", True, 1.0])
    def test_parse_rejects(self, text):
        with pytest.raises(ScalarParseError):
            parse_scalar(text)

    def test_real_field_rejects_imaginary(self):
        with pytest.raises(ScalarParseError):
            parse_scalar("1+2 i", "Q")

    @given(gaussians)
    def test_round_trip(self, x):
        assert parse_scalar(format_scalar(x)) == x

    @given(gaussians, gaussians)
    def test_field_axioms(self, a, b):
        assert normalize(a * b) == normalize(b * a)
        assert normalize((a + b) - b) == normalize(a)
        if b != 0:
            assert normalize((a / b) * b) == normalize(a)

    def test_i_squared(self):
        assert normalize(I * I) == -1
        assert normalize(1 / I) == -I

    def test_normalize_collapses(self):
        assert type(normalize(Fraction(4, 2))) is int
        assert type(normalize(GaussianRational(3, 0))) is int


class TestMatrices:
    @settings(max_examples=60, deadline=None)
    @given(int_matrices())
    def test_rank_and_rref_match_sympy(self, rows):
        M = ExactMatrix.from_rows(rows)
        S = sympy.Matrix(rows)
        for name in kernels.BACKENDS:
            with kernels.using_backend(name):
                assert rank(M) == S.rank()
                R, piv = S.rref()
                pivots, rr = rref(M)
                assert tuple(pivots) == piv
                assert [list(r) for r in rr] == [[Fraction(int(x.p), int(x.q)) for x in R.row(i)]
                                                 for i in range(len(piv))]

    @settings(max_examples=60, deadline=None)
    @given(int_matrices())
    def test_nullspace_is_canonical_kernel(self, rows):
        M = ExactMatrix.from_rows(rows)
        basis = nullspace(M)
        assert len(basis) == M.cols - rank(M)
        for v in basis:
            assert all(x == 0 for x in M.apply(v))
        oracle = sympy.Matrix(rows).nullspace()
        if oracle:
            canon, _ = sympy.Matrix.hstack(*oracle).T.rref()
            expected = [list(canon.row(i)) for i in range(canon.rows)]
        else:
            expected = []
        assert [[sympy.Rational(x) for x in v] for v in basis] == expected

    @settings(max_examples=40, deadline=None)
    @given(int_matrices(5, 5), st.integers(1, 5), st.data())
    def test_matmul_matches_naive(self, a_rows, k, data):
        A = ExactMatrix.from_rows(a_rows)
        b_rows = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=k, max_size=k),
                                    min_size=A.cols, max_size=A.cols))
        B = ExactMatrix.from_rows(b_rows)
        naive = [[sum(a_rows[i][t] * b_rows[t][j] for t in range(A.cols)) for j in range(k)]
                 for i in range(A.rows)]
        assert matmul(A, B).to_rows() == naive
        assert (A @ B).to_rows() == naive

    def test_rational_entries(self, backend):
        M = ExactMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
        assert rank(M) == 1
        assert nullspace(M) == [(1, Fraction(-3, 2))]

    def test_gaussian_entries(self):
        M = ExactMatrix.from_rows([[1, I], [I, -1]])
        assert rank(M) == to_sympy(M).rank() == 1
        (v,) = nullspace(M)
        assert all(normalize(x) == 0 for x in M.apply(v))

    def test_big_integers_fall_back_exactly(self, backend):
        big = 2**70
        M = ExactMatrix.from_rows([[big, 1, 3], [big + 1, 2, 5], [2 * big + 1, 3, 8]])
        assert rank(M) == sympy.Matrix(M.to_rows()).rank() == 2

    def test_growth_beyond_int64(self, backend):
        rows = [[(i + 2) ** j for j in range(12)] for i in range(12)]
        assert rank(ExactMatrix.from_rows(rows)) == 12

    def test_backends_agree_on_echelon(self):
        if not kernels.compiled_available():
            pytest.skip("compiled kernels not built")
        rows = [[(3 * i + 5 * j) % 7 - 3 for j in range(9)] for i in range(11)]
        outs = []
        for name in ("python", "compiled"):
            with kernels.using_backend(name):
                outs.append(kernels.echelon([list(r) for r in rows], 9, True))
        assert outs[0] == outs[1]

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            ExactMatrix(2, 2, (1, 2, 3))
        with pytest.raises(ValueError):
            ExactMatrix.from_rows([[1, 2], [3]])
        with pytest.raises(ValueError):
            ExactMatrix.zeros(2, 3) @ ExactMatrix.zeros(2, 3)

    def test_zero_and_empty(self, backend):
        assert rank(ExactMatrix.zeros(3, 4)) == 0
        assert len(nullspace(ExactMatrix.zeros(3, 4))) == 4
        assert nullspace(ExactMatrix.identity(3)) == []


def test_backend_selection():
    assert kernels.backend_name() in kernels.BACKENDS
    with kernels.using_backend("python"):
        assert kernels.backend_name() == "python"
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
