from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ternary_cohomology import freeterm as ft
from ternary_cohomology.algebras import builtin_example
from ternary_cohomology.cochain import Theory, coboundary_template, evaluate
from ternary_cohomology.takhtajan import induced_binary


def ternary_terms():
    return st.recursive(st.just(ft.X), lambda kids: st.builds(
        lambda a, b, c: ft.op("m", a, b, c), kids, kids, kids), max_leaves=9)


class TestTerms:
    def test_render_numbers_leaves(self):
        t = ft.parse_term("m(x, m(x, x, x), x)")
        assert str(t) == "m(x1, m(x2, x3, x4), x5)"
        assert t.nleaves == 5

    @given(ternary_terms())
    def test_parse_round_trip(self, t):
        assert ft.parse_term(str(t)) == t

    @pytest.mark.parametrize("bad", ["m(x1,", "m()", "m(x1 x2)", "x1)", "", "m(x1,,x2)"])
    def test_parse_errors(self, bad):
        with pytest.raises(ValueError):
            ft.parse_term(bad)

    def test_leaf_rules(self):
        with pytest.raises(ValueError):
            ft.Term("x", (ft.X,))
        with pytest.raises(ValueError):
            ft.Term("m", ())

    def test_elementary(self):
        assert str(ft.elementary("m", 3, 1, "f", 5)) == "m(x1, f(x2, x3, x4, x5, x6), x7)"
        assert str(ft.elementary("f", 2, 0, "mu", 2)) == "f(mu(x1, x2), x3)"

    def test_graft_and_match(self):
        pat = ft.parse_term("m(x1, m(x2, x3, x4), x5)")
        args = [ft.parse_term("mu(x1, x2)"), ft.X, ft.X, ft.X, ft.X]
        t = ft.graft(pat, args)
        assert ft.match(pat, t) == args
        assert ft.match(ft.parse_term("m(m(x1,x2,x3),x4,x5)"), t) is None
        with pytest.raises(ValueError):
            ft.graft(pat, [ft.X])

    def test_ordering_is_total(self):
        ts = [ft.parse_term(s) for s in ("m(x,x,m(x,x,x))", "m(m(x,x,x),x,x)", "m(x,m(x,x,x),x)")]
        assert sorted(ts) == sorted(reversed(ts))


class TestLinearForms:
    def test_zero_coefficients_dropped(self):
        t = ft.parse_term("m(x1,x2,x3)")
        f = ft.LinearForm([(t, 2), (t, -2)])
        assert not f and len(f) == 0
        assert ft.LinearForm.of(t) - ft.LinearForm.of(t) == ft.LinearForm()

    def test_pretty_signs(self):
        a, b = ft.parse_term("f(x1)"), ft.parse_term("m(x1, x2, f(x3))")
        lines = ft.LinearForm([(a, 1), (b, -1), (a.__class__("g", (ft.X,)), 3)]).pretty()
        assert lines == ["+ f(x1)", "+ 3·g(x1)", "- m(x1, x2, f(x3))"]

    def test_scale_and_add(self):
        t = ft.parse_term("m(x1,x2,x3)")
        f = ft.LinearForm.of(t, 3).scale(2) + ft.LinearForm.of(t)
        assert f.coefficient(t) == 7

    def test_compose_substitutes_and_checks_arity(self):
        outer = ft.LinearForm.of("m(x1, x2, f(x3, x4, x5))")
        inner = ft.LinearForm.of("m(x1, x2, x3)", 2)
        out = ft.compose(outer, inner, "f")
        assert out.coefficient("m(x1, x2, m(x3, x4, x5))") == 2
        with pytest.raises(ValueError):
            ft.compose(ft.LinearForm.of("m(x1, f(x2), x3)"), inner, "f")
        with pytest.raises(ValueError):
            ft.compose(ft.LinearForm.of("m(x1, x2, x3)"), inner, "f")


def _random_table(rng, n, k):
    t = np.empty((n,) * (k + 1), dtype=object)
    for idx in np.ndindex(*t.shape):
        t[idx] = rng.randint(-2, 2)
    return t


RULE_CASES = [
    (ft.PARTIAL_TERNARY, "pa-bracket-6d", Theory.TernaryPartial),
    (ft.WEAK_TERNARY, "totally-assoc-2d", Theory.TernaryWeak),
    (ft.TOTAL_TERNARY, "totally-assoc-2d", Theory.TernaryWeak),
    (ft.SKEW_BINARY, "skew-nil-2d", Theory.BinarySkew),
    (ft.ASSOC_BINARY, "W", Theory.BinaryAssociative),
]


def _algebra(name):
    if name == "W":
        return induced_binary(builtin_example("totally-assoc-2d")).derived
    return builtin_example(name)


def _values_agree(form, normal, tables_):
    if not form:
        return not normal
    before = evaluate(form, tables_)
    if not normal:
        return not np.asarray(before).any()
    return np.array_equal(before, evaluate(normal, tables_))


@pytest.mark.parametrize("rule,name,theory", RULE_CASES, ids=[r[0].name for r in RULE_CASES])
def test_normalize_preserves_values(rule, name, theory):
    """Rewriting is sound: values on an algebra satisfying the identity do not change."""
    alg = _algebra(name)
    g = _random_table(random.Random(11), alg.dim, 1)
    inner = ft.LinearForm.of(ft.elementary(theory.op, theory.arity, 0, "g", 1))
    composed = ft.compose(coboundary_template(theory, 2), inner, "f")
    normal = ft.normalize(composed, rule)
    assert not any(rule.has_redex(t) for t in normal.terms())
    assert _values_agree(composed, normal, {theory.op: alg.table, "g": g})


def _tree(rng, head, arity, leaves):
    """Random planar tree with exactly ``leaves`` leaves."""
    if leaves == 1:
        return ft.X
    parts = [1] * arity
    for _ in range((leaves - 1) // (arity - 1) - 1):
        parts[rng.randrange(arity)] += arity - 1
    return ft.op(head, *(_tree(rng, head, arity, k) for k in parts))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["TotalTernary", "WeakTernary"]), st.sampled_from([5, 7, 9]))
def test_deep_ternary_normal_forms(seed, rule_name, leaves):
    rng = random.Random(seed)
    rule = ft.RULES[rule_name]
    form = ft.LinearForm((_tree(rng, "m", 3, leaves), rng.randint(-3, 3)) for _ in range(4))
    normal = ft.normalize(form, rule)
    assert not any(rule.has_redex(t) for t in normal.terms())
    assert _values_agree(form, normal, {"m": builtin_example("totally-assoc-2d").table})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_partial_normal_forms_on_graded_algebra(seed):
    rng = random.Random(seed)
    form = ft.LinearForm((_tree(rng, "m", 3, 5), rng.randint(-3, 3)) for _ in range(3))
    normal = ft.normalize(form, ft.PARTIAL_TERNARY)
    assert _values_agree(form, normal, {"m": builtin_example("pa-bracket-6d").table})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([3, 4, 5]))
def test_binary_normal_forms(seed, leaves):
    rng = random.Random(seed)
    form = ft.LinearForm((_tree(rng, "mu", 2, leaves), rng.randint(-3, 3)) for _ in range(3))
    for rule, name in ((ft.ASSOC_BINARY, "W"), (ft.SKEW_BINARY, "skew-nil-2d")):
        normal = ft.normalize(form, rule)
        assert _values_agree(form, normal, {"mu": _algebra(name).table})


def test_weak_second_composite_vanishes_symbolically():
    composed = ft.compose(coboundary_template(Theory.TernaryWeak, 2),
                          coboundary_template(Theory.TernaryWeak, 1, symbol="g"), "f")
    assert composed  # non-trivial before rewriting
    assert ft.normalize(composed, ft.WEAK_TERNARY) == ft.LinearForm()


@pytest.mark.parametrize("theory", [Theory.TernaryPartial, Theory.TernaryAlt1, Theory.TernaryAlt2,
                                    Theory.BinarySkew, Theory.BinaryAssociative])
def test_second_composite_vanishes_for_other_theories(theory):
    composed = ft.compose(coboundary_template(theory, 2),
                          coboundary_template(theory, 1, symbol="g"), "f")
    assert ft.normalize(composed, theory.rule) == ft.LinearForm()


def test_nonterminating_rule_is_reported():
    loop = ft.RewriteRule("loop", [(ft.parse_term("m(x1, x2, x3)"),
                                    ft.LinearForm.of("m(x1, x2, x3)"))])
    with pytest.raises(RecursionError):
        ft.normalize(ft.LinearForm.of("m(x1, x2, x3)"), loop)


def test_rule_sides_must_agree():
    with pytest.raises(ValueError):
        ft.RewriteRule("bad", [(ft.parse_term("m(x1,x2,x3)"), ft.LinearForm.of("m(x1,x2,m(x3,x4,x5))"))])


def test_generic_identity_rule_specializes():
    rule = ft.ternary_identity_rule(1, 1)
    t = ft.parse_term("m(m(x1,x2,x3),x4,x5)")
    out = ft.normalize(ft.LinearForm.of(t), rule)
    assert out.coefficient("m(x1, m(x2, x3, x4), x5)") == -1
    assert out.coefficient("m(x1, x2, m(x3, x4, x5))") == -1
