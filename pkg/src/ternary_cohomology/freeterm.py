"""Free multilinear expressions and directed rewriting.

A :class:`Term` is a planar tree whose leaves are formal variables used
exactly once, left to right.  Because the leaf order is fixed, leaves are
anonymous: the i-th leaf read left to right *is* ``x_i``.  Substitution is
therefore grafting, and rewrite rules never need variable renaming.

Internal nodes carry a head: an operation symbol (``m`` ternary, ``mu``
binary, ``⊗`` for tensor products) or an opaque cochain symbol (``f``,
``g``, ...).  Rewrite rules only ever match operation symbols.
"""

from __future__ import annotations

import re
from itertools import product
from typing import Callable, Iterable, Iterator

from .exactmath.scalars import GaussianRational, format_scalar

LEAF = "x"
TENSOR = "⊗"


class Term:
    """Immutable planar tree; equality and ordering use the pre-order key."""

    __slots__ = ("head", "args", "key", "nleaves")

    def __init__(self, head: str, args: tuple[Term, ...] = ()):
        if head == LEAF and args:
            raise ValueError("a leaf has no arguments")
        if head != LEAF and not args:
            raise ValueError(f"node {head!r} needs arguments")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "args", tuple(args))
        if head == LEAF:
            key, nleaves = LEAF, 1
        else:
            key = head + "(" + ",".join(a.key for a in args) + ")"
            nleaves = sum(a.nleaves for a in args)
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "nleaves", nleaves)

    def __setattr__(self, name, value):
        raise AttributeError("Term is immutable")

    def __eq__(self, other):
        return isinstance(other, Term) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other: Term):
        return self.key < other.key

    @property
    def is_leaf(self) -> bool:
        return self.head == LEAF

    @property
    def arity(self) -> int:
        return len(self.args)

    def symbols(self) -> set[str]:
        if self.is_leaf:
            return set()
        out = {self.head}
        for a in self.args:
            out |= a.symbols()
        return out

    def count(self, head: str) -> int:
        if self.is_leaf:
            return 0
        return (self.head == head) + sum(a.count(head) for a in self.args)

    def __repr__(self):
        return f"Term({self})"

    def __str__(self):
        return self.render()

    def render(self, start: int = 1) -> str:
        counter = iter(range(start, start + self.nleaves))
        return _render(self, counter, top=True)


def _render(t: Term, counter: Iterator[int], top: bool = False) -> str:
    if t.is_leaf:
        return f"x{next(counter)}"
    if t.head == TENSOR:
        inner = " ⊗ ".join(_render(a, counter) for a in t.args)
        return inner if top else f"({inner})"
    return f"{t.head}(" + ", ".join(_render(a, counter) for a in t.args) + ")"


X = Term(LEAF)


def op(head: str, *args: Term) -> Term:
    return Term(head, tuple(args))


def leaves(n: int) -> list[Term]:
    return [X] * n


def elementary(outer: str, outer_arity: int, pos: int, inner: str, inner_arity: int) -> Term:
    """``outer(x, .., inner(x, .., x), .., x)`` with ``inner`` in slot ``pos``."""
    if not 0 <= pos < outer_arity:
        raise ValueError(f"slot {pos} out of range for arity {outer_arity}")
    args = [X] * outer_arity
    args[pos] = Term(inner, (X,) * inner_arity)
    return Term(outer, tuple(args))


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<punct>[(),]))")


def parse_term(text: str) -> Term:
    """Parse ``m(x1, m(x2, x3, x4), x5)``.

    Variables are either all bare ``x`` or numbered x1, x2, ... in order.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        tokens.append(mt.group("name") or mt.group("punct"))
        pos = mt.end()
    idx = 0
    seen = 0

    def peek() -> str:
        if idx >= len(tokens):
            raise ValueError(f"unexpected end of input in {text!r}")
        return tokens[idx]

    def parse() -> Term:
        nonlocal idx, seen
        tok = peek()
        idx += 1
        if tok == LEAF:
            return X
        if re.fullmatch(r"x\d+", tok):
            seen += 1
            if int(tok[1:]) != seen:
                raise ValueError(f"variables must be x1, x2, ... in order; got {tok}")
            return X
        if tok in "(),":
            raise ValueError(f"unexpected {tok!r} in {text!r}")
        if idx >= len(tokens) or tokens[idx] != "(":
            raise ValueError(f"expected '(' after {tok}")
        idx += 1
        args = [parse()]
        while peek() == ",":
            idx += 1
            args.append(parse())
        if peek() != ")":
            raise ValueError("expected ')'")
        idx += 1
        return Term(tok, tuple(args))

    term = parse()
    if idx != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return term


def graft(template: Term, args: list[Term] | tuple[Term, ...]) -> Term:
    """Replace the leaves of ``template`` (in order) by ``args``."""
    if len(args) != template.nleaves:
        raise ValueError(f"template has {template.nleaves} leaves, got {len(args)} arguments")
    it = iter(args)

    def walk(t: Term) -> Term:
        if t.is_leaf:
            return next(it)
        return Term(t.head, tuple(walk(a) for a in t.args))

    return walk(template)


def match(pattern: Term, term: Term) -> list[Term] | None:
    """Bind the leaves of ``pattern`` to subterms of ``term`` (in order)."""
    if pattern.is_leaf:
        return [term]
    if term.head != pattern.head or term.arity != pattern.arity:
        return None
    out: list[Term] = []
    for p, t in zip(pattern.args, term.args):
        b = match(p, t)
        if b is None:
            return None
        out.extend(b)
    return out


def _is_zero(c) -> bool:
    return c == 0


def format_coefficient(c) -> str:
    if isinstance(c, (int, GaussianRational)) or type(c).__name__ == "Fraction":
        return format_scalar(c)
    expr = getattr(c, "as_expr", None)
    return str(expr() if expr else c)


class LinearForm:
    """A finite linear combination of terms; zero coefficients are never stored.

    Coefficients are exact scalars by default but any commutative ring
    element with ``+``, ``*`` and ``== 0`` works (the Takhtajan analysis
    uses sympy polynomials).
    """

    __slots__ = ("_items",)

    def __init__(self, items: dict | Iterable | None = None):
        acc: dict[Term, object] = {}
        if items is not None:
            pairs = items.items() if isinstance(items, dict) else items
            for t, c in pairs:
                _accumulate(acc, t, c)
        self._items = acc

    @classmethod
    def of(cls, term: Term | str, coef=1) -> LinearForm:
        if isinstance(term, str):
            term = parse_term(term)
        return cls([(term, coef)])

    @classmethod
    def zero(cls) -> LinearForm:
        return cls()

    def items(self):
        return self._items.items()

    def terms(self) -> list[Term]:
        return list(self._items)

    def coefficient(self, term: Term | str):
        if isinstance(term, str):
            term = parse_term(term)
        return self._items.get(term, 0)

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def __iter__(self):
        return iter(collect(self))

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return not (self - other)._items

    def __add__(self, other: LinearForm) -> LinearForm:
        out = LinearForm()
        out._items = dict(self._items)
        for t, c in other._items.items():
            _accumulate(out._items, t, c)
        return out

    def __neg__(self) -> LinearForm:
        out = LinearForm()
        out._items = {t: -c for t, c in self._items.items()}
        return out

    def __sub__(self, other: LinearForm) -> LinearForm:
        return self + (-other)

    def scale(self, k) -> LinearForm:
        return LinearForm((t, k * c) for t, c in self._items.items())

    def __rmul__(self, k) -> LinearForm:
        return self.scale(k)

    def __mul__(self, k) -> LinearForm:
        return self.scale(k)

    def map_coefficients(self, fn: Callable) -> LinearForm:
        return LinearForm((t, fn(c)) for t, c in self._items.items())

    def pretty(self) -> list[str]:
        lines = []
        for t, c in collect(self):
            text = format_coefficient(c)
            sign = "+"
            if text.startswith("-") and not any(ch in text[1:] for ch in "+-* "):
                sign, text = "-", text[1:]
            if any(ch in text for ch in "+-* "):
                text = f"({text})"
            lines.append(f"{sign} {t}" if text == "1" else f"{sign} {text}·{t}")
        return lines

    def __str__(self):
        return "\n".join(self.pretty()) if self._items else "0"

    def __repr__(self):
        return f"LinearForm({len(self)} terms)"


def _accumulate(acc: dict, t: Term, c) -> None:
    if t in acc:
        c = acc[t] + c
        if _is_zero(c):
            del acc[t]
        else:
            acc[t] = c
    elif not _is_zero(c):
        acc[t] = c


def collect(form: LinearForm) -> list[tuple[Term, object]]:
    """Deterministically ordered (term, coefficient) pairs, zeros dropped."""
    return sorted(form.items(), key=lambda tc: tc[0].key)


def replace_symbol(term: Term, symbol: str, fn: Callable[[Term], Term]) -> Term:
    """Rebuild ``term`` with every ``symbol`` node ``s`` replaced by ``fn(s)``."""
    if term.is_leaf:
        return term
    if term.head == symbol:
        return fn(term)
    return Term(term.head, tuple(replace_symbol(a, symbol, fn) for a in term.args))


def compose(outer: LinearForm, inner: LinearForm, symbol: str) -> LinearForm:
    """Substitute the operator ``inner`` for the cochain symbol ``symbol`` in ``outer``.

    Each outer term must contain ``symbol`` exactly once, with as many
    arguments as the inner terms have leaves.
    """
    acc: dict[Term, object] = {}
    inner_items = list(inner.items())
    for t_out, c_out in outer.items():
        if t_out.count(symbol) != 1:
            raise ValueError(f"{t_out} must contain {symbol!r} exactly once")
        for t_in, c_in in inner_items:
            def sub(node: Term, t_in=t_in) -> Term:
                if node.arity != t_in.nleaves:
                    raise ValueError(
                        f"arity mismatch: {symbol} takes {node.arity} arguments, "
                        f"inner operator has {t_in.nleaves} variables")
                return graft(t_in, node.args)
            _accumulate(acc, replace_symbol(t_out, symbol, sub), c_out * c_in)
    out = LinearForm()
    out._items = acc
    return out


class RewriteRule:
    """Oriented multilinear identities ``lhs -> rhs`` (patterns share leaf order)."""

    def __init__(self, name: str, rules: list[tuple[Term, LinearForm]]):
        for lhs, rhs in rules:
            for t, _ in rhs.items():
                if t.nleaves != lhs.nleaves:
                    raise ValueError("rule sides must have the same number of variables")
        self.name = name
        self.rules = rules

    def __repr__(self):
        return f"RewriteRule({self.name!r})"

    def redex(self, term: Term):
        for lhs, rhs in self.rules:
            b = match(lhs, term)
            if b is not None:
                return b, rhs
        return None

    def has_redex(self, term: Term) -> bool:
        if term.is_leaf:
            return False
        return self.redex(term) is not None or any(self.has_redex(a) for a in term.args)


def _rule(name: str, *pairs: tuple[str, list[tuple[object, str]]]) -> RewriteRule:
    return RewriteRule(name, [
        (parse_term(lhs), LinearForm((parse_term(t), c) for c, t in rhs)) for lhs, rhs in pairs
    ])


# m(x1,x2,m(x3,x4,x5)) + m(x1,m(x2,x3,x4),x5) + m(m(x1,x2,x3),x4,x5) = 0
PARTIAL_TERNARY = _rule("PartialTernary", (
    "m(x1, x2, m(x3, x4, x5))",
    [(-1, "m(x1, m(x2, x3, x4), x5)"), (-1, "m(m(x1, x2, x3), x4, x5)")]))

WEAK_TERNARY = _rule("WeakTernary", (
    "m(m(x1, x2, x3), x4, x5)", [(1, "m(x1, x2, m(x3, x4, x5))")]))

TOTAL_TERNARY = _rule(
    "TotalTernary",
    ("m(m(x1, x2, x3), x4, x5)", [(1, "m(x1, x2, m(x3, x4, x5))")]),
    ("m(x1, m(x2, x3, x4), x5)", [(1, "m(x1, x2, m(x3, x4, x5))")]),
)

# m(m(123)45) - m(1m(234)5) + m(12m(345)) = 0
ALT1_TERNARY = _rule("Alt1Ternary", (
    "m(x1, x2, m(x3, x4, x5))",
    [(1, "m(x1, m(x2, x3, x4), x5)"), (-1, "m(m(x1, x2, x3), x4, x5)")]))

# m(m(123)45) - m(1m(234)5) - m(12m(345)) = 0
ALT2_TERNARY = _rule("Alt2Ternary", (
    "m(x1, x2, m(x3, x4, x5))",
    [(1, "m(m(x1, x2, x3), x4, x5)"), (-1, "m(x1, m(x2, x3, x4), x5)")]))

SKEW_BINARY = _rule("SkewBinary", (
    "mu(x1, mu(x2, x3))", [(-1, "mu(mu(x1, x2), x3)")]))

ASSOC_BINARY = _rule("AssocBinary", (
    "mu(mu(x1, x2), x3)", [(1, "mu(x1, mu(x2, x3))")]))

RULES = {r.name: r for r in (PARTIAL_TERNARY, WEAK_TERNARY, TOTAL_TERNARY, ALT1_TERNARY,
                             ALT2_TERNARY, SKEW_BINARY, ASSOC_BINARY)}


def ternary_identity_rule(c_middle, c_last, one=1) -> RewriteRule:
    """Rule for ``m(m(..),.,.) + c_middle m(.,m(..),.) + c_last m(.,.,m(..)) = 0``.

    Coefficients may be symbolic; ``one`` is the unit of their ring.
    """
    lhs = parse_term("m(m(x1, x2, x3), x4, x5)")
    rhs = LinearForm([(parse_term("m(x1, m(x2, x3, x4), x5)"), -one * c_middle),
                      (parse_term("m(x1, x2, m(x3, x4, x5))"), -one * c_last)])
    return RewriteRule("GenericTernary", [(lhs, rhs)])


MAX_REWRITE_DEPTH = 10_000


def normalize(form: LinearForm, rule: RewriteRule) -> LinearForm:
    """Apply ``rule`` until no redex remains anywhere in any term."""
    cache: dict[Term, dict] = {}
    acc: dict[Term, object] = {}
    for t, c in form.items():
        for nt, nc in _normal_term(t, rule, cache, 0).items():
            _accumulate(acc, nt, c * nc)
    out = LinearForm()
    out._items = acc
    return out


def _normal_term(t: Term, rule: RewriteRule, cache: dict, depth: int) -> dict:
    if t.is_leaf:
        return {t: 1}
    hit = cache.get(t)
    if hit is not None:
        return hit
    if depth > MAX_REWRITE_DEPTH:
        raise RecursionError(f"rewriting with {rule.name} did not terminate")
    children = [list(_normal_term(a, rule, cache, depth + 1).items()) for a in t.args]
    acc: dict[Term, object] = {}
    for combo in product(*children):
        coef = 1
        for _, c in combo:
            coef = coef * c
        node = Term(t.head, tuple(ct for ct, _ in combo))
        found = rule.redex(node)
        if found is None:
            _accumulate(acc, node, coef)
            continue
        binding, rhs = found
        for rt, rc in rhs.items():
            for nt, nc in _normal_term(graft(rt, binding), rule, cache, depth + 1).items():
                _accumulate(acc, nt, coef * rc * nc)
    cache[t] = acc
    return acc
