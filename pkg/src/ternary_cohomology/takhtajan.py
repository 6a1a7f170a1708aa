"""Binary algebras on W = V⊗V built from a ternary product.

``μ((x1⊗x2), (y1⊗y2)) = m(x1,x2,y1)⊗y2 + α x1⊗m(x2,y1,y2)``; the pair
``(i, j)`` is the W basis index ``i*n + j``.  Cochains on V lift to
cochains on W, and for α = 0 the Hochschild complex of W pulls back to
the weak totally associative complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import freeterm as ft
from . import tables
from .algebras import BinaryAlgebra, IdentityKind, TernaryAlgebra, check_identity
from .cochain import (Cochain, PreconditionError, Theory, coboundary, evaluate,
                      weak_general_template)
from .exactmath.scalars import GaussianRational, format_scalar, is_gaussian, normalize


@dataclass(frozen=True, eq=False)
class TensorSquareAlgebra:
    base: TernaryAlgebra
    alpha: object
    derived: BinaryAlgebra
    nambu: bool = False

    @property
    def n(self) -> int:
        return self.base.dim

    def pair(self, i: int, j: int) -> int:
        return i * self.n + j

    def unpair(self, w: int) -> tuple[int, int]:
        return divmod(w, self.n)


def induced_binary(alg: TernaryAlgebra, alpha=0, nambu: bool = False) -> TensorSquareAlgebra:
    """The product on W; ``nambu`` puts ``y1`` first in the second summand."""
    if alg.arity != 3:
        raise ValueError("induced_binary needs a ternary algebra")
    alpha = normalize(alpha)
    n = alg.dim
    C = alg.table
    eye = tables.identity(n)
    # axes of the V-level table: x1, x2, y1, y2, s, t
    first = np.multiply.outer(C, eye)                      # (x1,x2,y1,s,y2,t)
    first = np.transpose(first, (0, 1, 2, 4, 3, 5))
    if nambu:
        second = np.multiply.outer(eye, C)                 # (y1,s,x1,x2,y2,t)
        second = np.transpose(second, (2, 3, 0, 4, 1, 5))
    else:
        second = np.multiply.outer(eye, C)                 # (x1,s,x2,y1,y2,t)
        second = np.transpose(second, (0, 2, 3, 4, 1, 5))
    total = first + second * alpha if alpha != 0 else first
    field = "Q(i)" if alg.field == "Q(i)" or is_gaussian(alpha) else "Q"
    name = f"W({alg.name}, alpha={format_scalar(alpha)})" if alg.name else ""
    derived = BinaryAlgebra(n * n, total.reshape(n * n, n * n, n * n), field, name)
    return TensorSquareAlgebra(alg, alpha, derived, nambu)


# ---------------------------------------------------------------- lifting

def lift_table(phi: np.ndarray, alpha=0) -> np.ndarray:
    """Δφ(y1..y_{2p+2}) = φ(y1..y_{2p+1})⊗y_{2p+2} + α y1⊗φ(y2..y_{2p+2}) on W tables."""
    n = phi.shape[0]
    k = tables.inputs(phi)                 # 2p+1
    eye = tables.identity(n)
    first = np.multiply.outer(phi, eye)    # (y1..yk, s, y_{k+1}, t)
    first = np.transpose(first, list(range(k)) + [k + 1, k, k + 2])
    out = first
    if alpha != 0:
        second = np.multiply.outer(eye, phi)   # (y1, s, y2..y_{k+1}, t)
        second = np.transpose(second, [0] + list(range(2, k + 2)) + [1, k + 2])
        out = first + second * alpha
    m = (k + 1) // 2
    return out.reshape((n * n,) * (m + 1))


def lift_cochain(phi: Cochain, alpha=0) -> Cochain:
    """Δ_p: ternary p-cochains on V to binary p-cochains on W."""
    if phi.theory.arity != 3:
        raise ValueError("lift needs a ternary cochain")
    return Cochain(Theory.BinaryAssociative, phi.degree, phi.dim ** 2,
                   tables.tidy(lift_table(phi.table, normalize(alpha))))


# ---------------------------------------------------------------- recovery

@dataclass(frozen=True)
class DegreeOutcome:
    p: int
    outcome: str
    sign: int | None
    checked: int
    formula: str

    def to_dict(self) -> dict:
        return {"p": self.p, "outcome": self.outcome, "sign": self.sign,
                "basis_cochains": self.checked, "ternary_operator": self.formula}


@dataclass(frozen=True)
class RecoveryReport:
    degrees: tuple[DegreeOutcome, ...]

    @property
    def commutes(self) -> bool:
        return all(d.outcome != "fails" for d in self.degrees)

    def to_dict(self) -> dict:
        return {"commutes": self.commutes, "degrees": [d.to_dict() for d in self.degrees]}


def _compare(lhs: list[np.ndarray], rhs: list[np.ndarray]) -> tuple[str, int | None]:
    if all(tables.equal(a, b) for a, b in zip(lhs, rhs)):
        return "commutes", 1
    if all(tables.equal(a, -b) for a, b in zip(lhs, rhs)):
        return "commutes up to sign -1", -1
    return "fails", None


def recovery_degree(alg: TernaryAlgebra, p: int, general: bool = False) -> DegreeOutcome:
    """Compare ``d^p Δ_p φ`` with ``Δ_{p+1} δ φ`` for every basis p-cochain φ.

    ``δ`` is the weak coboundary raising φ by one degree; with
    ``general=True`` the alternating formula is used even where the weak
    δ¹ proper has four terms (p = 0).
    """
    W = induced_binary(alg, 0).derived
    theory = Theory.TernaryWeak
    lhs, rhs = [], []
    template = weak_general_template(p + 1) if general else None
    for phi in Cochain.basis(theory, p, alg.dim):
        lifted = lift_cochain(phi)
        lhs.append(coboundary(W, Theory.BinaryAssociative, lifted).table)
        if template is None:
            d_phi = coboundary(alg, theory, phi)
        else:
            d_phi = Cochain(theory, p + 1, alg.dim, evaluate(template, {"m": alg.table, "f": phi.table}))
        rhs.append(lift_cochain(d_phi).table)
    outcome, sign = _compare(lhs, rhs)
    formula = "alternating formula" if (general or p >= 1) else "four-term δ¹"
    return DegreeOutcome(p, outcome, sign, len(lhs), formula)


def recovery_check(alg: TernaryAlgebra, pmax: int = 2, pmin: int = 1,
                   check: bool = True) -> RecoveryReport:
    """Per-degree commutation of the Hochschild complex of W with the weak complex (α = 0)."""
    if alg.arity != 3:
        raise ValueError("recovery_check needs a ternary algebra")
    if check and not check_identity(alg, IdentityKind.TotallyAssociative).holds:
        raise PreconditionError("recovery needs a totally associative algebra")
    return RecoveryReport(tuple(recovery_degree(alg, p) for p in range(pmin, pmax + 1)))


# ---------------------------------------------------------------- associative type

ALPHA, LAMBDA, C1, C2, _T = sympy.symbols("alpha lambda c1 c2 t")
_GENS = (ALPHA, LAMBDA, C1, C2)


def _poly(expr) -> sympy.Poly:
    return sympy.Poly(expr, *_GENS, domain="QQ")


def _tensor(a: ft.Term, b: ft.Term) -> ft.Term:
    return ft.Term(ft.TENSOR, (a, b))


def _mu(A: ft.LinearForm, B: ft.LinearForm, alpha) -> ft.LinearForm:
    out = []
    for ta, ca in A.items():
        a1, a2 = ta.args
        for tb, cb in B.items():
            b1, b2 = tb.args
            c = ca * cb
            out.append((_tensor(ft.Term("m", (a1, a2, b1)), b2), c))
            out.append((_tensor(a1, ft.Term("m", (a2, b1, b2))), c * alpha))
    return ft.LinearForm(out)


def associator_form(identity: str) -> ft.LinearForm:
    """A₁ + λA₂ over free variables, normalized by the chosen ternary identity."""
    one, alpha, lam = _poly(1), _poly(ALPHA), _poly(LAMBDA)
    X = ft.LinearForm([(_tensor(ft.X, ft.X), one)])
    A1 = _mu(_mu(X, X, alpha), X, alpha)
    A2 = _mu(X, _mu(X, X, alpha), alpha)
    form = A1 + A2.scale(lam)
    if identity == "total":
        rule = ft.TOTAL_TERNARY
    elif identity == "partial":
        rule = ft.ternary_identity_rule(_poly(C1), _poly(C2), one)
    else:
        raise ValueError("identity must be 'total' or 'partial'")
    return ft.normalize(form, rule)


def _in_field(value, field: str):
    re_part, im_part = sympy.nsimplify(value).as_real_imag()
    if not (re_part.is_Rational and im_part.is_Rational):
        return None
    if field == "Q" and im_part != 0:
        return None
    re_q = Fraction(int(re_part.p), int(re_part.q))
    im_q = Fraction(int(im_part.p), int(im_part.q))
    return normalize(GaussianRational(re_q, im_q)) if im_q else normalize(re_q)


@dataclass(frozen=True)
class AssocTypeReport:
    identity: str
    field: str
    constraints: tuple[sympy.Poly, ...]
    nonzero: tuple[str, ...]
    solutions: tuple[dict, ...]
    algebraic: tuple[dict, ...]

    def constraint_strings(self) -> list[str]:
        return [str(p.as_expr()) for p in self.constraints]

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "field": self.field,
            "constraints": [f"{s} = 0" for s in self.constraint_strings()],
            "nonzero": list(self.nonzero),
            "solutions": [{k: format_scalar(v) for k, v in sol.items()} for sol in self.solutions],
            "all_solutions": [{k: str(v) for k, v in sol.items()} for sol in self.algebraic],
        }


def assoc_type_analysis(identity: str = "total", field: str = "Q") -> AssocTypeReport:
    """Conditions on (α, λ) making μ satisfy ``μ(μ(u,v),w) + λ μ(u,μ(v,w)) = 0``.

    ``total`` assumes m totally associative.  ``partial`` assumes an
    identity ``T1 + c1 T2 + c2 T3 = 0`` with c1, c2 unknown and nonzero, so
    the solutions also report the identity that would be needed.
    """
    identity = identity.lower()
    field = {"qi": "Q(i)", "q(i)": "Q(i)", "q": "Q"}.get(field.lower(), field)
    if field not in ("Q", "Q(i)"):
        raise ValueError("field must be Q or Q(i)")
    form = associator_form(identity)
    seen, constraints = set(), []
    for _, c in ft.collect(form):
        key = c.as_expr()
        if key not in seen:
            seen.add(key)
            constraints.append(c)
    unknowns = [ALPHA, LAMBDA]
    guard = LAMBDA
    nonzero = ["lambda"]
    if identity == "partial":
        unknowns += [C1, C2]
        guard = LAMBDA * C1 * C2
        nonzero += ["c1", "c2"]
    equations = [c.as_expr() for c in constraints] + [_T * guard - 1]
    raw = sympy.solve(equations, unknowns + [_T], dict=True)
    names = {ALPHA: "alpha", LAMBDA: "lambda", C1: "c1", C2: "c2"}
    algebraic, exact = [], []
    for sol in raw:
        values = {names[s]: sympy.simplify(sol.get(s, s)) for s in unknowns}
        algebraic.append(values)
        if any(v.free_symbols for v in values.values()):
            continue
        converted = {k: _in_field(v, field) for k, v in values.items()}
        if all(v is not None for v in converted.values()):
            exact.append(converted)
    exact.sort(key=lambda d: [format_scalar(d[k]) for k in sorted(d)])
    algebraic.sort(key=lambda d: [str(d[k]) for k in sorted(d)])
    return AssocTypeReport(identity, field, tuple(constraints), tuple(nonzero),
                           tuple(exact), tuple(algebraic))


def expected_total_constraints() -> set:
    a, l = ALPHA, LAMBDA
    return {_poly(1 + a + l), _poly(a ** 2 + l * a + l * a ** 2), _poly(a * (1 + l))}
