"""``terncoh`` command line.

Exit status: 0 success, 1 when a check-type command finds the property
false, 2 on bad input.  Reports go to stdout as JSON (``--format text``
for prose); errors go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import algebras as alg_mod
from .algebras import AlgebraFormatError, IdentityKind, builtin_example, check_identity, load_algebra
from .cochain import (CoboundaryUndefined, Cochain, PreconditionError, Theory, cohomology,
                      complex_defect, derivations)
from .exactmath import kernels
from .exactmath.scalars import ScalarParseError, format_scalar, parse_scalar
from .nogo import Case, solve
from .takhtajan import assoc_type_analysis, induced_binary, lift_cochain, recovery_check


class InputError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got {raw!r}") from None


def max_p() -> int:
    return _env_int("TERNCOH_MAX_P", 3)


def max_dim() -> int:
    return _env_int("TERNCOH_MAX_DIM", 4)


def _load(args) -> alg_mod.Algebra:
    if getattr(args, "example", None):
        try:
            alg = builtin_example(args.example)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    elif getattr(args, "file", None):
        try:
            alg = load_algebra(args.file)
        except OSError as exc:
            raise InputError(f"{args.file}: {exc.strerror}") from None
        except AlgebraFormatError as exc:
            raise InputError(f"{args.file}: {exc}") from None
    else:
        raise InputError("give an algebra FILE or --example NAME")
    if alg.dim > max_dim():
        raise InputError(f"dimension {alg.dim} exceeds the cap {max_dim()} (TERNCOH_MAX_DIM)")
    return alg


def _cap_p(p: int, what: str = "p") -> None:
    if p > max_p():
        raise InputError(f"{what}={p} exceeds the cap {max_p()} (TERNCOH_MAX_P)")
    if p < 1:
        raise InputError(f"{what} must be at least 1")


def _theory(text: str) -> Theory:
    try:
        return Theory.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _source(alg) -> dict:
    return {"name": alg.name, "dim": alg.dim, "arity": alg.arity, "field": alg.field}


# ---------------------------------------------------------------- commands

def cmd_check(args):
    alg = _load(args)
    try:
        kind = IdentityKind.parse(args.identity)
        report = check_identity(alg, kind)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {"command": "check", "algebra": _source(alg), **report.to_dict()}
    lines = [f"{alg.name or 'algebra'}: {kind.name} {'holds' if report.holds else 'fails'}"
             f" ({report.checked} basis tuples)"]
    if not report.holds:
        cx = out["counterexample"]
        lines.append(f"first failure at e{cx['basis_tuple']}: {cx['equation']} = {cx['defect']}")
    return (0 if report.holds else 1), out, lines


def _precondition(alg, theory: Theory, skip: bool):
    if alg.arity != theory.arity:
        raise InputError(f"theory {theory.value} needs an algebra of arity {theory.arity}")
    if not skip:
        rep = check_identity(alg, theory.identity)
        if not rep.holds:
            raise InputError(f"algebra is not {theory.identity.name} "
                             f"(fails at e{[i + 1 for i in rep.counterexample]}); "
                             "use --no-check to compute anyway")


def cmd_cohomology(args):
    alg = _load(args)
    theory = _theory(args.theory)
    _cap_p(args.p)
    _precondition(alg, theory, args.no_check)
    try:
        rep = cohomology(alg, theory, args.p)
    except (CoboundaryUndefined, MemoryError) as exc:
        raise InputError(str(exc)) from None
    out = {"command": "cohomology", "algebra": _source(alg), **rep.to_dict()}
    lines = [f"{theory.name} H^{args.p}: dim Z = {rep.dim_cocycles}, dim B = {rep.dim_coboundaries}, "
             f"dim H = {rep.dim_H} (cochain space of dimension {rep.dim_cochains})"]
    return 0, out, lines


def _map_rows(c: Cochain) -> list[list[str]]:
    """Matrix of a map V -> V: column j is the image of e_j."""
    n = c.dim
    return [[format_scalar(c.table[j, i]) for j in range(n)] for i in range(n)]


def _scaled(c, name: str) -> str:
    if c == 1:
        return name
    if c == -1:
        return f"-{name}"
    text = format_scalar(c)
    return f"({text}) {name}" if " i" in text else f"{text} {name}"


def cmd_derivations(args):
    alg = _load(args)
    theory = _theory(args.theory) if args.theory else None
    try:
        basis = derivations(alg, theory)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {"command": "derivations", "algebra": _source(alg), "dimension": len(basis),
           "basis": [_map_rows(c) for c in basis]}
    lines = [f"derivations: dimension {len(basis)}"]
    for k, c in enumerate(basis, 1):
        images = []
        for j in range(c.dim):
            terms = [_scaled(c.table[j, s], f"e{s + 1}") for s in range(c.dim) if c.table[j, s] != 0]
            images.append(f"f(e{j + 1}) = " + (" + ".join(terms) if terms else "0"))
        lines.append(f"  D{k}: " + ", ".join(images))
    return 0, out, lines


def cmd_verify_complex(args):
    alg = _load(args)
    theory = _theory(args.theory)
    _cap_p(args.pmax, "pmax")
    _precondition(alg, theory, args.no_check)
    top = args.pmax
    if theory.max_degree is not None:
        top = min(top, theory.max_degree - 1)
    degrees = []
    ok = True
    for p in range(1, top + 1):
        try:
            D = complex_defect(alg, theory, p)
        except MemoryError as exc:
            raise InputError(str(exc)) from None
        zero = D.is_zero()
        ok &= zero
        degrees.append({"p": p, "shape": [D.rows, D.cols], "zero": zero, "nonzero_entries": D.nnz()})
    out = {"command": "verify-complex", "theory": theory.value, "algebra": _source(alg),
           "degrees": degrees, "holds": ok, "kernel_backend": kernels.backend_name()}
    lines = [f"δ^{d['p'] + 1}∘δ^{d['p']} ({d['shape'][0]}x{d['shape'][1]}): "
             f"{'zero' if d['zero'] else str(d['nonzero_entries']) + ' nonzero entries'}" for d in degrees]
    if not degrees:
        lines.append(f"{theory.name} has no composable pair δ^(p+1)∘δ^p")
    return (0 if ok else 1), out, lines


def cmd_nogo(args):
    try:
        verdict = solve(Case.parse(args.case))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {"command": "nogo", **verdict.to_dict()}
    lines = [f"case {args.case}: ansatz"] + [f"  {d}" for d in verdict.system.ansatz.describe()]
    lines.append(f"{len(verdict.system.rows)} constraints:")
    lines += [f"  {row}" for row in verdict.system.pretty()]
    lines.append(f"nullspace dimension {verdict.dimension}: {verdict.text}")
    return 0, out, lines


def _alpha(text: str):
    try:
        return parse_scalar(text, "Q(i)")
    except ScalarParseError as exc:
        raise InputError(f"--alpha: {exc}") from None


def cmd_takhtajan(args):
    if args.mode == "analyze":
        field = args.field
        try:
            rep = assoc_type_analysis(args.identity, field)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        out = {"command": "takhtajan", "mode": "analyze", **rep.to_dict()}
        lines = [f"identity {rep.identity}, field {rep.field}; constraints:"]
        lines += [f"  {c}" for c in out["constraints"]]
        lines.append(f"nonzero: {', '.join(rep.nonzero)}")
        if rep.solutions:
            lines += ["solutions:"] + [
                "  " + ", ".join(f"{k} = {v}" for k, v in s.items()) for s in out["solutions"]]
        else:
            lines.append(f"no solutions over {rep.field}")
        return 0, out, lines
    alg = _load(args)
    if alg.arity != 3:
        raise InputError("takhtajan needs a ternary algebra")
    if args.mode == "lift":
        alpha = _alpha(args.alpha)
        tsq = induced_binary(alg, alpha, nambu=args.nambu)
        if args.cochain:
            try:
                with open(args.cochain, encoding="utf-8") as fh:
                    phi = Cochain.from_document(json.load(fh))
            except (OSError, ValueError) as exc:
                raise InputError(f"{args.cochain}: {exc}") from None
            if phi.theory.arity != 3 or phi.dim != alg.dim:
                raise InputError("cochain must be ternary and live on the algebra's space")
        else:
            phi = Cochain.of_algebra(alg, Theory.TernaryWeak)
        lifted = lift_cochain(phi, alpha)
        out = {"command": "takhtajan", "mode": "lift", "alpha": format_scalar(alpha),
               "nambu": args.nambu, "W": alg_mod.algebra_to_document(tsq.derived),
               "lift": lifted.to_document()}
        lines = [f"W = V⊗V of dimension {tsq.derived.dim}, alpha = {format_scalar(alpha)}"
                 f"{' (Nambu variant)' if args.nambu else ''}",
                 f"{len(tsq.derived.constants())} nonzero structure constants on W",
                 f"lift of a {phi.degree}-cochain: {len(lifted.to_document()['entries'])} nonzero entries"]
        return 0, out, lines
    _cap_p(args.pmax, "pmax")
    try:
        rep = recovery_check(alg, args.pmax, check=not args.no_check)
    except PreconditionError as exc:
        raise InputError(str(exc)) from None
    out = {"command": "takhtajan", "mode": "recover", "algebra": _source(alg), **rep.to_dict()}
    lines = [f"p={d.p}: {d.outcome} ({d.checked} basis cochains)" for d in rep.degrees]
    return (0 if rep.commutes else 1), out, lines


def cmd_examples(args):
    if args.action == "list":
        out = {"command": "examples", "examples": {k: v[1] for k, v in sorted(alg_mod.BUILTINS.items())}}
        lines = [f"{k:20s} {v[1]}" for k, v in sorted(alg_mod.BUILTINS.items())]
        return 0, out, lines
    if not args.name:
        raise InputError("examples emit needs a NAME")
    try:
        alg = builtin_example(args.name, args.dim, args.arity)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return 0, alg_mod.algebra_to_document(alg), None


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="terncoh",
                                     description="Exact cohomology tools for ternary and binary algebras.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_algebra(p, required=True):
        p.add_argument("file", nargs="?", help="algebra document (JSON)")
        p.add_argument("--example", metavar="NAME", help="use a built-in example instead of FILE")
        p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    p = sub.add_parser("check", help="verify an identity exhaustively on basis tuples")
    p.add_argument("--identity", required=True, help="e.g. total, weak, partial, skew, nambu, LieTriple")
    with_algebra(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("cohomology", help="dimensions of Z^p, B^p, H^p")
    p.add_argument("--theory", required=True, help="partial, weak, alt1, alt2, assoc, skew")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--no-check", action="store_true", help="skip the defining-identity check")
    with_algebra(p)
    p.set_defaults(handler=cmd_cohomology)

    p = sub.add_parser("derivations", help="basis of the derivations (kernel of δ¹)")
    p.add_argument("--theory", help="defaults to partial (ternary) or assoc (binary)")
    with_algebra(p)
    p.set_defaults(handler=cmd_derivations)

    p = sub.add_parser("verify-complex", help="check δ^(p+1)∘δ^p = 0 as exact matrices")
    p.add_argument("--theory", default="weak")
    p.add_argument("--pmax", type=int, default=2)
    p.add_argument("--no-check", action="store_true")
    with_algebra(p)
    p.set_defaults(handler=cmd_verify_complex)

    p = sub.add_parser("nogo", help="solve the ansatz for a third coboundary")
    p.add_argument("--case", required=True, choices=[c.value for c in Case])
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_nogo)

    p = sub.add_parser("takhtajan", help="tensor-square construction on W = V⊗V")
    p.add_argument("--mode", choices=("analyze", "lift", "recover"), required=True)
    p.add_argument("--alpha", default="0")
    p.add_argument("--identity", choices=("total", "partial"), default="total")
    p.add_argument("--field", choices=("Q", "Qi"), default="Q")
    p.add_argument("--nambu", action="store_true", help="Nambu-type second summand")
    p.add_argument("--cochain", help="ternary cochain document to lift (default: the product)")
    p.add_argument("--pmax", type=int, default=2)
    p.add_argument("--no-check", action="store_true")
    with_algebra(p)
    p.set_defaults(handler=cmd_takhtajan)

    p = sub.add_parser("examples", help="list or emit built-in algebras")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("--dim", type=int)
    p.add_argument("--arity", type=int, choices=(2, 3))
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_examples)
    return parser


def render(out: dict, lines: list[str] | None, fmt: str) -> str:
    if fmt == "text" and lines is not None:
        return "\n".join(lines) + "\n"
    return json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status, out, lines = args.handler(args)
    except InputError as exc:
        print(f"terncoh: error: {exc}", file=stderr)
        return 2
    stdout.write(render(out, lines, args.format))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
