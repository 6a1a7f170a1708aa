"""Ternary and binary algebras given by structure constants.

Indices are 0-based in the API and 1-based in documents and reports.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import random
import re
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import tables
from .exactmath.scalars import ScalarParseError, format_scalar, is_gaussian, normalize, parse_scalar

FIELDS = ("Q", "Q(i)")


class AlgebraFormatError(ValueError):
    """Malformed algebra document; ``location`` says where."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class IdentityKind(enum.Enum):
    TotallyAssociative = ("TotallyAssociative", 3)
    WeakTotallyAssociative = ("WeakTotallyAssociative", 3)
    PartiallyAssociative = ("PartiallyAssociative", 3)
    AlternateFirstKind = ("AlternateFirstKind", 3)
    AlternateSecondKind = ("AlternateSecondKind", 3)
    Symmetric = ("Symmetric", 3)
    SkewSymmetric = ("SkewSymmetric", 3)
    Commutative = ("Commutative", 3)
    TernaryLieS5 = ("TernaryLieS5", 3)
    TernaryLieS3 = ("TernaryLieS3", 3)
    NambuFundamental = ("NambuFundamental", 3)
    LieTriple = ("LieTriple", 3)
    BinaryAssociative = ("BinaryAssociative", 2)
    BinarySkewAssociative = ("BinarySkewAssociative", 2)

    @property
    def arity(self) -> int:
        return self.value[1]

    @classmethod
    def parse(cls, text: str) -> IdentityKind:
        key = re.sub(r"[^a-z0-9]", "", text.lower())
        for kind in cls:
            if kind.name.lower() == key:
                return kind
        alias = _KIND_ALIASES.get(key)
        if alias is None:
            raise ValueError(f"unknown identity kind {text!r}")
        return alias


_KIND_ALIASES = {
    "total": IdentityKind.TotallyAssociative,
    "weak": IdentityKind.WeakTotallyAssociative,
    "partial": IdentityKind.PartiallyAssociative,
    "alt1": IdentityKind.AlternateFirstKind,
    "alt2": IdentityKind.AlternateSecondKind,
    "skew": IdentityKind.SkewSymmetric,
    "nambu": IdentityKind.NambuFundamental,
    "filippov": IdentityKind.NambuFundamental,
    "lies5": IdentityKind.TernaryLieS5,
    "lies3": IdentityKind.TernaryLieS3,
    "assoc": IdentityKind.BinaryAssociative,
    "associative": IdentityKind.BinaryAssociative,
    "skewassoc": IdentityKind.BinarySkewAssociative,
    "skewassociative": IdentityKind.BinarySkewAssociative,
}


@dataclass(frozen=True, eq=False)
class Algebra:
    """An ``n``-dimensional algebra with a multilinear product of fixed arity.

    ``table[i, j, (k,) s]`` is the coefficient of ``e_s`` in the product of
    basis vectors.
    """

    dim: int
    table: np.ndarray
    field: str = "Q"
    name: str = ""
    arity: int = dataclasses.field(init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}")
        t = np.array(self.table, dtype=object)
        if t.ndim not in (3, 4) or any(s != self.dim for s in t.shape):
            raise ValueError(f"table shape {t.shape} does not fit dimension {self.dim}")
        t = tables.tidy(t)
        if self.field == "Q" and any(is_gaussian(v) for v in t.reshape(-1)):
            raise ValueError("complex constants need field Q(i)")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "arity", t.ndim - 1)

    def __eq__(self, other):
        return (isinstance(other, Algebra) and self.dim == other.dim and self.arity == other.arity
                and tables.equal(self.table, other.table))

    def __hash__(self):
        return hash((self.dim, self.arity, tuple(self.table.reshape(-1))))

    @classmethod
    def from_constants(cls, dim: int, constants: dict, field: str = "Q", name: str = "",
                       arity: int | None = None) -> Algebra:
        """Build from sparse ``{(i, j, [k,] s): c}`` with 0-based indices."""
        if arity is None:
            arity = getattr(cls, "ARITY", None)
        if arity is None:
            lengths = {len(key) for key in constants}
            if len(lengths) != 1:
                raise ValueError("cannot infer arity")
            arity = lengths.pop() - 1
        t = tables.zeros(dim, arity)
        for key, c in constants.items():
            if len(key) != arity + 1:
                raise ValueError(f"key {key} does not match arity {arity}")
            t[tuple(key)] = normalize(c)
        kind = TernaryAlgebra if arity == 3 else BinaryAlgebra
        if cls is not Algebra and cls is not kind:
            raise ValueError(f"{cls.__name__} needs arity {cls.ARITY}")
        return kind(dim, t, field, name)

    def constants(self) -> list[tuple[tuple[int, ...], object]]:
        return tables.sparse_items(self.table)

    def product(self, *vectors: Sequence) -> list:
        if len(vectors) != self.arity:
            raise ValueError(f"product takes {self.arity} vectors")
        t = self.table
        for v in vectors:
            if len(v) != self.dim:
                raise ValueError(f"vector of length {len(v)} in dimension {self.dim}")
            t = np.tensordot(np.asarray(list(v), dtype=object), t, axes=([0], [0]))
        return [normalize(x) for x in t]

    def basis(self, i: int) -> list:
        v = [0] * self.dim
        v[i] = 1
        return v


class TernaryAlgebra(Algebra):
    ARITY = 3

    def __post_init__(self):
        super().__post_init__()
        if self.arity != 3:
            raise ValueError("a ternary algebra needs a 4-index table")


class BinaryAlgebra(Algebra):
    ARITY = 2

    def __post_init__(self):
        super().__post_init__()
        if self.arity != 2:
            raise ValueError("a binary algebra needs a 3-index table")


def eval_ternary(alg: TernaryAlgebra, u: Sequence, v: Sequence, w: Sequence) -> list:
    if alg.arity != 3:
        raise ValueError("eval_ternary needs a ternary algebra")
    return alg.product(u, v, w)


def eval_binary(alg: BinaryAlgebra, u: Sequence, v: Sequence) -> list:
    if alg.arity != 2:
        raise ValueError("eval_binary needs a binary algebra")
    return alg.product(u, v)


# ---------------------------------------------------------------- identities

@dataclass(frozen=True)
class IdentityReport:
    kind: IdentityKind
    holds: bool
    counterexample: tuple[int, ...] | None = None
    defect: tuple | None = None
    equation: str | None = None
    checked: int = 0

    def to_dict(self) -> dict:
        out = {"identity": self.kind.name, "holds": self.holds, "checked_tuples": self.checked}
        if not self.holds:
            out["counterexample"] = {
                "basis_tuple": [i + 1 for i in self.counterexample],
                "defect": [format_scalar(c) for c in self.defect],
                "equation": self.equation,
            }
        return out


def _nestings(C: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return tables.insert(C, C, 0), tables.insert(C, C, 1), tables.insert(C, C, 2)


def _equations(alg: Algebra, kind: IdentityKind) -> list[tuple[str, np.ndarray]]:
    C = alg.table
    if kind is IdentityKind.BinaryAssociative or kind is IdentityKind.BinarySkewAssociative:
        left, right = tables.insert(C, C, 0), tables.insert(C, C, 1)
        if kind is IdentityKind.BinaryAssociative:
            return [("mu(mu(x1,x2),x3) - mu(x1,mu(x2,x3))", left - right)]
        return [("mu(mu(x1,x2),x3) + mu(x1,mu(x2,x3))", left + right)]
    if kind in (IdentityKind.TotallyAssociative, IdentityKind.WeakTotallyAssociative,
                IdentityKind.PartiallyAssociative, IdentityKind.AlternateFirstKind,
                IdentityKind.AlternateSecondKind):
        t1, t2, t3 = _nestings(C)
        return {
            IdentityKind.TotallyAssociative: [("T1 - T2", t1 - t2), ("T2 - T3", t2 - t3)],
            IdentityKind.WeakTotallyAssociative: [("T1 - T3", t1 - t3)],
            IdentityKind.PartiallyAssociative: [("T1 + T2 + T3", t1 + t2 + t3)],
            IdentityKind.AlternateFirstKind: [("T1 - T2 + T3", t1 - t2 + t3)],
            IdentityKind.AlternateSecondKind: [("T1 - T2 - T3", t1 - t2 - t3)],
        }[kind]
    if kind is IdentityKind.Symmetric:
        return [(f"m∘{_perm_label(s)} - m", tables.permute_inputs(C, s) - C)
                for _, s in tables.signed_permutations(3) if s != (0, 1, 2)]
    if kind is IdentityKind.SkewSymmetric:
        return [(f"m∘{_perm_label(s)} - sgn·m", tables.permute_inputs(C, s) - sg * C)
                for sg, s in tables.signed_permutations(3) if s != (0, 1, 2)]
    if kind is IdentityKind.Commutative:
        return [("signed S3 sum", _signed_sum(C, 3))]
    if kind is IdentityKind.TernaryLieS5:
        return [("signed S5 sum of [[..],..]", _signed_sum(tables.insert(C, C, 0), 5))]
    if kind is IdentityKind.TernaryLieS3:
        return [("signed S3 sum of [[..],x4,x5]", _signed_sum(tables.insert(C, C, 0), 3))]
    if kind is IdentityKind.NambuFundamental:
        return [("fundamental identity", _fundamental(C))]
    if kind is IdentityKind.LieTriple:
        cyclic = C + tables.permute_inputs(C, (1, 2, 0)) + tables.permute_inputs(C, (2, 0, 1))
        return [("fundamental identity", _fundamental(C)), ("cyclic sum", cyclic)]
    raise ValueError(f"unhandled identity {kind}")


def _perm_label(s: Sequence[int]) -> str:
    return "(" + ",".join(f"x{i + 1}" for i in s) + ")"


def _signed_sum(t: np.ndarray, k: int) -> np.ndarray:
    """Σ sgn(σ) t(x_σ(1) .. x_σ(k), x_{k+1} ..) over permutations of the first ``k`` inputs."""
    total = tables.zeros(t.shape[0], tables.inputs(t))
    rest = tuple(range(k, tables.inputs(t)))
    for sg, s in tables.signed_permutations(k):
        term = tables.permute_inputs(t, tuple(s) + rest)
        total = total + term if sg > 0 else total - term
    return total


def _fundamental(C: np.ndarray) -> np.ndarray:
    t1, t2, t3 = _nestings(C)
    return (t3 - t1 - tables.permute_inputs(t2, (2, 0, 1, 3, 4))
            - tables.permute_inputs(t3, (2, 3, 0, 1, 4)))


def check_identity(alg: Algebra, kind: IdentityKind | str) -> IdentityReport:
    """Exhaustive check over basis tuples; the first failing tuple (lex order) is reported."""
    if isinstance(kind, str):
        kind = IdentityKind.parse(kind)
    if kind.arity != alg.arity:
        raise ValueError(f"{kind.name} needs an algebra of arity {kind.arity}, got {alg.arity}")
    equations = _equations(alg, kind)
    width = tables.inputs(equations[0][1])
    first = None
    for label, eq in equations:
        hit = tables.first_nonzero(eq)
        if hit is not None and (first is None or hit < first[0]):
            first = (hit, label, eq)
    checked = alg.dim ** width
    if first is None:
        return IdentityReport(kind, True, checked=checked)
    hit, label, eq = first
    defect = tuple(normalize(x) for x in eq[hit])
    return IdentityReport(kind, False, hit, defect, label, checked)


def induced_lie_bracket(alg: TernaryAlgebra) -> TernaryAlgebra:
    """[x1,x2,x3] = Σ_{σ∈S3} sgn(σ) m(x_σ(1), x_σ(2), x_σ(3))."""
    if alg.arity != 3:
        raise ValueError("the bracket is defined for ternary algebras")
    name = f"bracket({alg.name})" if alg.name else ""
    return TernaryAlgebra(alg.dim, _signed_sum(alg.table, 3), alg.field, name)


# ---------------------------------------------------------------- registry

def _totally_assoc_2d() -> TernaryAlgebra:
    rules = {
        (1, 1, 1): {1: 1}, (1, 1, 2): {2: 1}, (1, 2, 2): {1: 1, 2: 1}, (2, 1, 1): {2: 1},
        (2, 2, 1): {1: 1, 2: 1}, (2, 2, 2): {1: 1, 2: 2}, (1, 2, 1): {2: 1}, (2, 1, 2): {1: 1, 2: 1},
    }
    consts = {(i - 1, j - 1, k - 1, s - 1): c
              for (i, j, k), out in rules.items() for s, c in out.items()}
    return TernaryAlgebra.from_constants(2, consts, name="totally-assoc-2d")


def _partially_assoc_2d() -> TernaryAlgebra:
    return TernaryAlgebra.from_constants(2, {(0, 0, 0, 1): 1}, name="partially-assoc-2d")


def _cross4() -> TernaryAlgebra:
    consts = {}
    for sg, s in tables.signed_permutations(4):
        i, j, k, l = s
        consts[(i, j, k, l)] = sg
    return TernaryAlgebra.from_constants(4, consts, name="cross4")


def _pa_bracket_6d() -> TernaryAlgebra:
    # graded: e1..e3 in degree 1, e4, e5 in degree 3, e6 in degree 5
    consts = {(0, 0, 1, 3): 1, (0, 1, 2, 4): 1, (3, 2, 1, 5): 1, (0, 4, 1, 5): -1}
    return TernaryAlgebra.from_constants(6, consts, name="pa-bracket-6d")


def _skew_nil_2d() -> BinaryAlgebra:
    return BinaryAlgebra.from_constants(2, {(0, 0, 1): 1}, name="skew-nil-2d")


def _unit_1d() -> BinaryAlgebra:
    return BinaryAlgebra.from_constants(1, {(0, 0, 0): 1}, name="unit-1d")


def zero_algebra(dim: int, arity: int = 3) -> Algebra:
    if arity not in (2, 3):
        raise ValueError("arity must be 2 or 3")
    kind = TernaryAlgebra if arity == 3 else BinaryAlgebra
    return kind(dim, tables.zeros(dim, arity), "Q", f"zero({dim},{arity})")


BUILTINS: dict[str, tuple[Callable[[], Algebra], str]] = {
    "totally-assoc-2d": (_totally_assoc_2d, "2-dim totally associative ternary algebra (8 rules)"),
    "partially-assoc-2d": (_partially_assoc_2d, "2-dim partially associative: m(e1,e1,e1) = e2"),
    "cross4": (_cross4, "4-dim Nambu-Lie bracket, [e1,e2,e3] = e4"),
    "pa-bracket-6d": (_pa_bracket_6d, "6-dim partially associative, nonzero double products"),
    "skew-nil-2d": (_skew_nil_2d, "2-dim skew-associative binary algebra: mu(e1,e1) = e2"),
    "unit-1d": (_unit_1d, "1-dim associative binary algebra: mu(e1,e1) = e1"),
    "zero": (lambda: zero_algebra(2, 3), "zero algebra; zero(n, arity) with arity 2/3 or binary/ternary"),
}

_ZERO = re.compile(r"zero\(\s*(\d+)\s*(?:,\s*(\w+)\s*)?\)")


def builtin_example(name: str, dim: int | None = None, arity: int | str | None = None) -> Algebra:
    """Registered example algebra; ``zero(n, arity)`` is parametrised."""
    mt = _ZERO.fullmatch(name.strip())
    if mt:
        dim = int(mt.group(1))
        arity = mt.group(2) or arity
        name = "zero"
    if name == "zero":
        if isinstance(arity, str):
            arity = {"binary": 2, "ternary": 3}.get(arity.lower(), None) or int(arity)
        return zero_algebra(dim if dim is not None else 2, arity if arity is not None else 3)
    try:
        return BUILTINS[name][0]()
    except KeyError:
        raise ValueError(f"unknown example {name!r}; known: {', '.join(sorted(BUILTINS))}") from None


# ---------------------------------------------------------------- random algebras

def random_algebra(dim: int, arity: int = 3, rng: random.Random | None = None,
                   density: float = 0.3, values: Sequence[int] = (-2, -1, 1, 2)) -> Algebra:
    rng = rng or random.Random()
    consts = {}
    for idx in np.ndindex(*(dim,) * (arity + 1)):
        if rng.random() < density:
            consts[idx] = rng.choice(values)
    return Algebra.from_constants(dim, consts, arity=arity)


def random_partially_associative(dim: int, rng: random.Random | None = None,
                                 density: float = 0.5) -> TernaryAlgebra:
    """Nilpotent construction: ``V = U ⊕ K`` with m(U,U,U) ⊂ K and m = 0 on K.

    Every double product vanishes, so partial associativity holds; the
    split point and coefficients are random.
    """
    if dim < 2:
        raise ValueError("need dim >= 2")
    rng = rng or random.Random()
    split = rng.randint(1, dim - 1)
    consts = {}
    for i, j, k in np.ndindex(split, split, split):
        for s in range(split, dim):
            if rng.random() < density:
                consts[(i, j, k, s)] = rng.choice((-2, -1, 1, 2, 3))
    return TernaryAlgebra.from_constants(dim, consts)


# ---------------------------------------------------------------- documents

def algebra_to_document(alg: Algebra) -> dict:
    keys = "ijks" if alg.arity == 3 else "ijs"
    constants = [dict({k: i + 1 for k, i in zip(keys, idx)}, c=format_scalar(c))
                 for idx, c in alg.constants()]
    doc = {"dim": alg.dim, "arity": alg.arity, "field": alg.field, "constants": constants}
    if alg.name:
        doc["name"] = alg.name
    return doc


def dumps_algebra(alg: Algebra) -> str:
    return json.dumps(algebra_to_document(alg), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def algebra_from_document(doc: dict) -> Algebra:
    if not isinstance(doc, dict):
        raise AlgebraFormatError("document must be an object", "$")
    for key in ("dim", "arity", "constants"):
        if key not in doc:
            raise AlgebraFormatError(f"missing field {key!r}", "$")
    dim, arity = doc["dim"], doc["arity"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise AlgebraFormatError("dim must be a positive integer", "$.dim")
    if arity not in (2, 3):
        raise AlgebraFormatError("arity must be 2 or 3", "$.arity")
    fld = doc.get("field", "Q")
    if fld in ("Qi", "Q[i]"):
        fld = "Q(i)"
    if fld not in FIELDS:
        raise AlgebraFormatError(f"field must be one of {FIELDS}", "$.field")
    if not isinstance(doc["constants"], list):
        raise AlgebraFormatError("constants must be a list", "$.constants")
    keys = "ijks" if arity == 3 else "ijs"
    consts: dict[tuple[int, ...], object] = {}
    for pos, rec in enumerate(doc["constants"]):
        where = f"$.constants[{pos}]"
        if not isinstance(rec, dict):
            raise AlgebraFormatError("constant must be an object", where)
        extra = set(rec) - set(keys) - {"c"}
        if extra:
            raise AlgebraFormatError(f"unexpected fields {sorted(extra)}", where)
        idx = []
        for k in keys:
            v = rec.get(k)
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= dim:
                raise AlgebraFormatError(f"index {k} must be an integer in 1..{dim}", where)
            idx.append(v - 1)
        if "c" not in rec:
            raise AlgebraFormatError("missing coefficient c", where)
        try:
            c = parse_scalar(str(rec["c"]), fld)
        except ScalarParseError as exc:
            raise AlgebraFormatError(str(exc), where + ".c") from None
        key = tuple(idx)
        if key in consts:
            raise AlgebraFormatError(f"duplicate constant {[i + 1 for i in key]}", where)
        consts[key] = c
    return Algebra.from_constants(dim, consts, fld, str(doc.get("name", "")), arity=arity)


def loads_algebra(text: str) -> Algebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
    return algebra_from_document(doc)


def load_algebra(path: str) -> Algebra:
    with open(path, encoding="utf-8") as fh:
        return loads_algebra(fh.read())
