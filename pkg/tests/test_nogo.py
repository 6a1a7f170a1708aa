from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest

from ternary_cohomology import freeterm as ft
from ternary_cohomology.cochain import Theory
from ternary_cohomology.nogo import (WEAK_PATTERN, Case, build_ansatz, combination_text, derive_constraints,
                                     solve, substitute)


def vec(k, text):
    """Coefficient vector of a combination written like 'a3 - a1' or 'a1 + a8'."""
    v = [0] * k
    sign = 1
    for tok in text.replace("-", " - ").replace("+", " + ").split():
        if tok in "+-":
            sign = 1 if tok == "+" else -1
        else:
            v[int(tok[1:]) - 1] += sign
            sign = 1
    return tuple(v)


# Displayed constraint rows for the partial case, term -> combination.
TERNARY_PARTIAL = {
    "g(x1, x2, m(x3, m(x4, x5, x6), x7))": "a7 - a8",
    "g(x1, x2, m(m(x3, x4, x5), x6, x7))": "a6 - a8",
    "g(x1, m(x2, x3, x4), m(x5, x6, x7))": "a5 + a8",
    "g(x1, m(x2, m(x3, x4, x5), x6), x7)": "a6 - a7",
    "g(x1, m(m(x2, x3, x4), x5, x6), x7)": "a5 - a7",
    "g(m(x1, x2, x3), x4, m(x5, x6, x7))": "a4 + a8",
    "g(m(x1, x2, x3), m(x4, x5, x6), x7)": "a4 + a7",
    "g(m(x1, m(x2, x3, x4), x5), x6, x7)": "a5 - a6",
    "g(m(m(x1, x2, x3), x4, x5), x6, x7)": "a4 - a6",
    "m(x1, x2, g(x3, x4, m(x5, x6, x7)))": "a1 + a8",
    "m(x1, x2, g(x3, m(x4, x5, x6), x7))": "a1 + a7",
    "m(x1, x2, g(m(x3, x4, x5), x6, x7))": "a1 + a6",
    "m(x1, g(x2, x3, m(x4, x5, x6)), x7)": "a2 + a7",
    "m(x1, g(x2, m(x3, x4, x5), x6), x7)": "a2 + a6",
    "m(x1, g(m(x2, x3, x4), x5, x6), x7)": "a2 + a5",
    "m(x1, m(x2, x3, x4), g(x5, x6, x7))": "a5 - a1",
    "m(x1, m(x2, x3, g(x4, x5, x6)), x7)": "a2 - a1",
    "m(x1, m(x2, g(x3, x4, x5), x6), x7)": "a2 - a1",
    "m(x1, m(g(x2, x3, x4), x5, x6), x7)": "a2 - a8",
    "m(g(x1, x2, x3), m(x4, x5, x6), x7)": "a7 - a8",
    "m(g(x1, x2, m(x3, x4, x5)), x6, x7)": "a3 + a6",
    "m(g(x1, m(x2, x3, x4), x5), x6, x7)": "a3 + a5",
    "m(g(m(x1, x2, x3), x4, x5), x6, x7)": "a3 + a4",
    "m(m(x1, x2, x3), x4, g(x5, x6, x7))": "a4 - a1",
    "m(m(x1, x2, x3), g(x4, x5, x6), x7)": "a4 - a1",
    "m(m(x1, x2, g(x3, x4, x5)), x6, x7)": "a3 - a1",
    "m(m(x1, g(x2, x3, x4), x5), x6, x7)": "a3 - a8",
    "m(m(g(x1, x2, x3), x4, x5), x6, x7)": "a3 - a8",
}

BINARY_SKEW = {
    "g(x1, mu(mu(x2, x3), x4))": "a3 - a4",
    "g(mu(x1, x2), mu(x3, x4))": "a2 + a4",
    "g(mu(mu(x1, x2), x3), x4)": "a2 - a3",
    "mu(x1, g(x2, mu(x3, x4)))": "a1 + a4",
    "mu(x1, g(mu(x2, x3), x4))": "a1 + a3",
    "mu(g(x1, mu(x2, x3)), x4)": "a3 + a5",
    "mu(g(mu(x1, x2), x3), x4)": "a2 + a5",
    "mu(mu(x1, x2), g(x3, x4))": "a2 - a1",
    "mu(mu(x1, g(x2, x3)), x4)": "a5 - a1",
    "mu(mu(g(x1, x2), x3), x4)": "a5 - a4",
}


@pytest.mark.parametrize("case,display,k", [("ternary-partial", TERNARY_PARTIAL, 8),
                                            ("binary-skew", BINARY_SKEW, 5)])
def test_rows_match_display(case, display, k):
    system = derive_constraints(case)
    got = {str(t): c for t, c in system.rows}
    assert got == {t: vec(k, c) for t, c in display.items()}
    assert Counter(c for _, c in system.rows) == Counter(vec(k, c) for c in display.values())


@pytest.mark.parametrize("case,rows,dim", [
    ("ternary-partial", 28, 0), ("ternary-alt1", 28, 0), ("ternary-alt2", 28, 0),
    ("binary-skew", 10, 0), ("ternary-weak", 22, 1), ("binary-assoc", 10, 1),
])
def test_verdicts(case, rows, dim):
    v = solve(case)
    assert len(v.system.rows) == rows
    assert v.dimension == dim
    assert v.exists == bool(dim)


def test_weak_solution_is_the_alternating_operator():
    v = solve("ternary-weak")
    assert v.contains(WEAK_PATTERN)
    assert v.basis == (tuple(Fraction(x) for x in WEAK_PATTERN),)
    assert substitute("ternary-weak", WEAK_PATTERN) == ft.LinearForm()
    assert substitute("ternary-partial", WEAK_PATTERN) != ft.LinearForm()


def test_hochschild_solution():
    (basis,) = solve("binary-assoc").basis
    # mu(x1, f) - f(mu, ., .) + f(., mu, .) - f(., ., mu) + mu(f, x4)
    assert basis == (1, -1, 1, -1, 1)


def test_ansatz_shapes():
    a = build_ansatz("ternary-partial")
    assert [str(t) for t in a.patterns][:3] == [
        "m(x1, x2, f(x3, x4, x5, x6, x7))", "m(x1, f(x2, x3, x4, x5, x6), x7)",
        "m(f(x1, x2, x3, x4, x5), x6, x7)"]
    assert len(build_ansatz("binary-skew").patterns) == 5
    assert Case.parse("Binary_Skew") is Case.BinarySkew
    assert Case.TernaryAlt1.theory is Theory.TernaryAlt1
    with pytest.raises(ValueError):
        Case.parse("quaternary")


def test_combination_text():
    assert combination_text((1, 0, -1), ["a1", "a2", "a3"]) == "a1 - a3"
    assert combination_text((-2, 1), ["a1", "a2"]) == "-2a1 + a2"
    assert combination_text((0, 0), ["a1", "a2"]) == "0"


def test_report_document():
    d = solve("binary-skew").to_dict()
    assert d["case"] == "binary-skew"
    assert d["rank"] == 5 and d["nullspace_dimension"] == 0 and d["nullspace_basis"] == []
    assert len(d["matrix"]) == 10 and len(d["matrix"][0]) == 5
    assert d["verdict"].startswith("no δ³ exists")
