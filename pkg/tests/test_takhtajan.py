from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
import sympy

from ternary_cohomology.algebras import builtin_example, check_identity, random_algebra
from ternary_cohomology.cochain import Cochain, PreconditionError, Theory, complex_defect
from ternary_cohomology.exactmath.scalars import I, GaussianRational
from ternary_cohomology.takhtajan import (ALPHA, LAMBDA, assoc_type_analysis, expected_total_constraints,
                                          induced_binary, lift_cochain, recovery_check, recovery_degree)


def loop_mu(alg, alpha, nambu=False):
    """μ on W by direct products: (x1⊗x2)(y1⊗y2) = m(x1,x2,y1)⊗y2 + α x1⊗m(x2,y1,y2).

    The Nambu variant replaces the second summand by α y1⊗m(x1,x2,y2).
    """
    n = alg.dim
    C = alg.table
    out = np.zeros((n * n,) * 3, dtype=object)
    for x1, x2, y1, y2 in itertools.product(range(n), repeat=4):
        a, b = x1 * n + x2, y1 * n + y2
        for s in range(n):
            out[a, b, s * n + y2] += C[x1, x2, y1, s]
            if nambu:
                out[a, b, y1 * n + s] += alpha * C[x1, x2, y2, s]
            else:
                out[a, b, x1 * n + s] += alpha * C[x2, y1, y2, s]
    return out


@pytest.mark.parametrize("name", ["totally-assoc-2d", "partially-assoc-2d", "cross4"])
@pytest.mark.parametrize("alpha", [0, 1, -2, I])
def test_induced_product_matches_loops(name, alpha):
    alg = builtin_example(name)
    W = induced_binary(alg, alpha).derived
    assert np.array_equal(W.table, loop_mu(alg, alpha))
    assert W.field == ("Q(i)" if alpha == I else "Q")


def test_nambu_variant_matches_loops():
    alg = builtin_example("totally-assoc-2d")
    assert np.array_equal(induced_binary(alg, 1, nambu=True).derived.table, loop_mu(alg, 1, True))


def test_pairing():
    tsq = induced_binary(builtin_example("totally-assoc-2d"))
    assert tsq.pair(1, 0) == 2 and tsq.unpair(3) == (1, 1)


class TestInducedAssociativity:
    def test_total_gives_associative(self):
        W = induced_binary(builtin_example("totally-assoc-2d"), 0).derived
        assert check_identity(W, "assoc").holds

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_hochschild_square_zero(self, p):
        W = induced_binary(builtin_example("totally-assoc-2d"), 0).derived
        assert complex_defect(W, "assoc", p).is_zero()

    def test_random_total_algebras(self):
        rng = random.Random(5)
        hits = 0
        for _ in range(200):
            alg = random_algebra(2, 3, rng, density=0.1, values=(1, -1))
            if check_identity(alg, "total").holds:
                hits += 1
                assert check_identity(induced_binary(alg).derived, "assoc").holds
        assert hits >= 5

    def test_nonzero_alpha_breaks_associativity(self):
        W = induced_binary(builtin_example("totally-assoc-2d"), 1).derived
        assert not check_identity(W, "assoc").holds


class TestAnalysis:
    def test_total_constraints_and_solution(self):
        for field in ("Q", "Qi"):
            rep = assoc_type_analysis("total", field)
            assert set(rep.constraints) == expected_total_constraints()
            assert rep.solutions == ({"alpha": 0, "lambda": -1},)

    def test_total_constraints_by_substitution(self):
        rep = assoc_type_analysis("total")
        for poly in rep.constraints:
            assert poly.as_expr().subs({ALPHA: 0, LAMBDA: -1}) == 0
        values = [p.as_expr().subs({ALPHA: 1, LAMBDA: -1}) for p in rep.constraints]
        assert any(v != 0 for v in values)

    def test_total_solution_is_realized(self):
        """(α, λ) = (0, -1) means μ is associative: check on the example."""
        W = induced_binary(builtin_example("totally-assoc-2d"), 0).derived
        assert check_identity(W, "assoc").holds

    def test_partial_has_no_rational_solution(self):
        rep = assoc_type_analysis("partial", "Q")
        assert rep.solutions == ()
        assert rep.to_dict()["solutions"] == []

    def test_partial_gaussian_solutions(self):
        rep = assoc_type_analysis("partial", "Q(i)")
        got = {(s["alpha"], s["lambda"]) for s in rep.solutions}
        assert got == {(I, -1), (-I, -1)}
        for s in rep.solutions:
            assert s["c1"] == s["alpha"] and s["c2"] == -1
        for s in rep.algebraic:
            subs = {sympy.Symbol(k): v for k, v in s.items()}
            for poly in rep.constraints:
                assert sympy.simplify(poly.as_expr().subs(subs)) == 0

    def test_report_strings(self):
        d = assoc_type_analysis("partial", "Qi").to_dict()
        assert d["field"] == "Q(i)" and d["nonzero"] == ["lambda", "c1", "c2"]
        assert {"alpha": "0+1 i", "lambda": "-1", "c1": "0+1 i", "c2": "-1"} in d["solutions"]
        assert "alpha - c1 = 0" in d["constraints"]

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            assoc_type_analysis("weak")
        with pytest.raises(ValueError):
            assoc_type_analysis("total", "R")


def loop_lift(phi, alpha):
    n = phi.dim
    k = phi.inputs
    out = np.zeros((n * n,) * ((k + 1) // 2 + 1), dtype=object)
    for ys in itertools.product(range(n), repeat=k + 1):
        w = tuple(ys[2 * i] * n + ys[2 * i + 1] for i in range((k + 1) // 2))
        for s in range(n):
            out[w + (s * n + ys[k],)] += phi.table[ys[:k] + (s,)]
            out[w + (ys[0] * n + s,)] += alpha * phi.table[ys[1:] + (s,)]
    return out


class TestLift:
    @pytest.mark.parametrize("degree", [0, 1, 2])
    @pytest.mark.parametrize("alpha", [0, 1, GaussianRational(1, 2)])
    def test_matches_loops(self, degree, alpha):
        rng = random.Random(degree)
        size = 2 ** (2 * degree + 2)
        phi = Cochain.from_vector(Theory.TernaryWeak, degree, 2, [rng.randint(-2, 2) for _ in range(size)])
        lifted = lift_cochain(phi, alpha)
        assert lifted.theory is Theory.BinaryAssociative and lifted.degree == degree and lifted.dim == 4
        assert np.array_equal(lifted.table, loop_lift(phi, alpha))

    def test_identity_lifts_to_identity(self):
        lifted = lift_cochain(Cochain.identity(Theory.TernaryWeak, 2))
        assert lifted == Cochain.identity(Theory.BinaryAssociative, 4)

    def test_product_lift_value(self):
        alg = builtin_example("totally-assoc-2d")
        lifted = lift_cochain(Cochain.of_algebra(alg, Theory.TernaryWeak))
        assert lifted.value(3, 3) == [0, 1, 0, 2]

    def test_binary_cochain_rejected(self):
        with pytest.raises(ValueError):
            lift_cochain(Cochain.identity(Theory.BinaryAssociative, 2))


class TestRecovery:
    def test_commutes_on_total(self):
        rep = recovery_check(builtin_example("totally-assoc-2d"), pmax=2)
        assert rep.commutes
        assert [(d.p, d.outcome, d.sign) for d in rep.degrees] == [(1, "commutes", 1), (2, "commutes", 1)]
        assert rep.degrees[1].checked == 2 ** 6

    def test_zero_algebra(self):
        assert recovery_check(builtin_example("zero(2)"), pmax=2).commutes

    def test_four_term_degree_zero(self):
        alg = builtin_example("totally-assoc-2d")
        assert recovery_degree(alg, 0).outcome == "fails"
        assert recovery_degree(alg, 0, general=True).outcome == "commutes"

    def test_requires_total(self):
        with pytest.raises(PreconditionError):
            recovery_check(builtin_example("pa-bracket-6d"))
        with pytest.raises(ValueError):
            recovery_check(builtin_example("unit-1d"))
