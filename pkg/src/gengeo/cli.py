"""Command-line workbench: ``gengeo <command> [options] EXPR...``.

Exit codes: 0 accept/success, 1 reject, 2 usage, parse or precondition error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import calculus, structures
from .clifford import annihilator, type_of
from .exterior import Multivector, mukai
from .parser import ParseError, as_constant, parse_expr, parse_matrix, to_text
from .poly import Poly, PolyForm, PolySection
from .report import StructureReport, jsonable
from .super_ops import TABLES, table, verify_table

SCHEMA = 1
EXIT = {"accept": 0, "reject": 1, "error": 2}


class UsageError(Exception):
    pass


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read().strip()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return arg


def _expr(text: str, dim: Optional[int]):
    return parse_expr(_read(text), dim)


def _form(text: str, dim: Optional[int]) -> Multivector:
    v = _expr(text, dim)
    if not isinstance(v, Multivector):
        raise UsageError(f"expected a form with constant coefficients: {text}")
    return v


def _poly_form(text: str, dim: Optional[int]) -> PolyForm:
    v = _expr(text, dim)
    if isinstance(v, Multivector):
        return PolyForm.from_multivector(v)
    if isinstance(v, PolySection):
        raise UsageError(f"expected a form, got a section: {text}")
    return v


def _section(text: str, dim: Optional[int]) -> PolySection:
    v = _expr(text, dim)
    if isinstance(v, PolySection):
        return v
    pf = PolyForm.from_multivector(v) if isinstance(v, Multivector) else v
    if pf.grades() not in ((), (1,)):
        raise UsageError(f"expected a section X + xi: {text}")
    return PolySection.from_form([0] * pf.dim, pf)


def _common_dim(args, texts: Sequence[str]) -> Optional[int]:
    """--dim, or the largest index across all inputs so they share one dimension."""
    if args.dim is not None:
        return args.dim
    from .parser import max_index, parse

    return max(max(max_index(parse(_read(t))) for t in texts), 1)


# -- commands -------------------------------------------------------------

def cmd_pair(args) -> StructureReport:
    n = _common_dim(args, [args.a, args.b])
    a, b = _form(args.a, n), _form(args.b, n)
    rep = StructureReport("Mukai pairing")
    rep.data["value"] = mukai(a, b)
    rep.data["top form"] = Multivector.top(n, mukai(a, b))
    return rep


def cmd_annihilator(args) -> StructureReport:
    rho = _form(args.rho, args.dim)
    rep = StructureReport("annihilator")
    w, pure = annihilator(rho)
    rep.data["rank"] = w.rank
    rep.data["pure"] = pure
    rep.data["W"] = w
    if pure:
        rep.data["type"] = type_of(w)
    else:
        rep.fail("annihilator rank below n", w.rank)
    return rep


def cmd_classify(args) -> StructureReport:
    rho = _form(args.rho, args.dim)
    return structures.gcy_check(rho)


def cmd_transform(args) -> StructureReport:
    n = _common_dim(args, [args.B, args.target])
    B = _poly_form(args.B, n)
    if B.grades() not in ((), (2,)):
        raise UsageError("B must be a 2-form")
    target = _expr(args.target, n)
    rep = StructureReport("B-transform")
    if isinstance(target, PolySection):
        rep.data["result"] = to_text(calculus.b_transform(B, target))
        return rep
    # exp(B) as a finite sum of wedge powers
    eB = power = PolyForm.function(Poly.const(n))
    k = 0
    while True:
        k += 1
        power = power.wedge(B) * Fraction(1, k)
        if not power:
            break
        eB = eB + power
    if isinstance(target, Multivector):
        target = PolyForm.from_multivector(target)
    result = eB.wedge(target)
    const = as_constant(result)
    rep.data["result"] = to_text(const if const is not None else result)
    return rep


def cmd_kahler(args) -> StructureReport:
    if args.J is not None or args.omega is not None:
        if args.J is None or args.omega is None:
            raise UsageError("kahler needs both --J and --omega (or two pure forms)")
        J = parse_matrix(_read(args.J), args.dim)
        n = len(J)
        omega = _form(args.omega, n)
        J0, J1 = structures.gcs_from_J(J), structures.gcs_from_omega(omega)
        if args.B is not None:
            B = _form(args.B, n)
            J0, J1 = structures.conjugate_by(J0, B), structures.conjugate_by(J1, B)
        return structures.gen_kahler_check(J0, J1)
    if len(args.forms) != 2:
        raise UsageError("kahler needs --J/--omega or two pure forms")
    n = _common_dim(args, args.forms)
    r0, r1 = (_form(f, n) for f in args.forms)
    return structures.gen_kahler_check(structures.gcs_from_pure(r0), structures.gcs_from_pure(r1))


def cmd_su(args) -> StructureReport:
    n = _common_dim(args, [args.rho0, args.rho1])
    r0, r1 = _form(args.rho0, n), _form(args.rho1, n)
    return structures.su_check(r0, r1, strict=args.strict_normalization)


def cmd_courant(args) -> StructureReport:
    texts = [args.z1, args.z2] + ([args.H] if args.H else [])
    n = _common_dim(args, texts)
    z1, z2 = _section(args.z1, n), _section(args.z2, n)
    rep = StructureReport("Courant bracket")
    if args.H:
        rep.data["bracket"] = to_text(calculus.courant_twisted(z1, z2, _poly_form(args.H, n)))
    else:
        rep.data["bracket"] = to_text(calculus.courant(z1, z2))
    return rep


def cmd_nijenhuis(args) -> StructureReport:
    if args.omega is not None:
        omega = _poly_form(args.omega, args.dim)
        J = calculus.EndoField.from_omega(omega)
        rep = calculus.integrability_report("gcs", J, seed=args.seed)
        frame = calculus.graph_frame(omega * structures.I)
        closure = calculus.courant_closure(frame, seed=args.seed)
        rep.data["annihilator frame closed"] = closure.accepted
        if closure.accepted != rep.accepted:
            rep.fail("Nijenhuis and Courant-closure verdicts disagree")
        return rep
    if args.J is not None:
        J = parse_matrix(_read(args.J), args.dim)
        return calculus.integrability_report("complex", J)
    raise UsageError("nijenhuis needs --omega FORM or --J MATRIX")


def cmd_verify_tables(args) -> StructureReport:
    names = [args.table] if args.table else [
        name for name, (kind, _) in TABLES.items()
        if kind == args.model or (args.model == "kahler" and kind in ("riemannian", "symplectic"))
    ]
    rep = StructureReport(f"tables on the {args.model} model, m={args.m}, degree {args.degree}")
    for name in names:
        sub = verify_table(table(name, args.m, args.model), args.degree)
        rep.data[name] = sub.data["identities"]
        rep.absorb(sub, name)
    return rep


def cmd_interpolate(args) -> StructureReport:
    from .scalar import Scalar

    omega_c = _form(args.omega_c, args.dim)
    try:
        t = Scalar(Fraction(args.t))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--t must be a rational number, got {args.t!r}") from None
    rho = structures.interpolation_family(omega_c, t, args.k)
    rep = StructureReport("interpolation family")
    rep.data["rho_t"] = to_text(rho)
    rep.data["pure"] = annihilator(rho)[1]
    rep.data["<rho_t, conj rho_t>"] = mukai(rho, rho.conj())
    if not rep.data["pure"]:
        rep.fail("rho_t is not pure")
    return rep


COMMANDS = {
    "pair": cmd_pair,
    "annihilator": cmd_annihilator,
    "classify": cmd_classify,
    "transform": cmd_transform,
    "kahler": cmd_kahler,
    "su": cmd_su,
    "courant": cmd_courant,
    "nijenhuis": cmd_nijenhuis,
    "verify-tables": cmd_verify_tables,
    "interpolate": cmd_interpolate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="real dimension n (default: largest index used)")
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p = argparse.ArgumentParser(prog="gengeo", description="Exact generalised-geometry workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pair", parents=[common], help="Mukai pairing <a, b>")
    s.add_argument("a")
    s.add_argument("b")
    s = sub.add_parser("annihilator", parents=[common], help="annihilator, purity and type")
    s.add_argument("rho")
    s = sub.add_parser("classify", parents=[common], help="generalised Calabi-Yau test")
    s.add_argument("rho")
    s = sub.add_parser("transform", parents=[common], help="B-field transform of a form or section")
    s.add_argument("--B", required=True)
    s.add_argument("target")
    s = sub.add_parser("kahler", parents=[common], help="generalised Kähler test")
    s.add_argument("--J", help="matrix 'a,b;c,d'")
    s.add_argument("--omega")
    s.add_argument("--B")
    s.add_argument("forms", nargs="*")
    s = sub.add_parser("su", parents=[common], help="generalised SU(m) test")
    s.add_argument("--strict-normalization", action="store_true")
    s.add_argument("rho0")
    s.add_argument("rho1")
    s = sub.add_parser("courant", parents=[common], help="Courant bracket of two sections")
    s.add_argument("--H", help="closed 3-form for the twisted bracket")
    s.add_argument("z1")
    s.add_argument("z2")
    s = sub.add_parser("nijenhuis", parents=[common], help="integrability of J_omega or J")
    s.add_argument("--omega")
    s.add_argument("--J")
    s = sub.add_parser("verify-tables", parents=[common], help="supercommutator tables")
    s.add_argument("--model", choices=["riemannian", "kahler", "symplectic"], default="kahler")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--table", choices=sorted(TABLES))
    s = sub.add_parser("interpolate", parents=[common], help="t^k exp(omega_c / t)")
    s.add_argument("--t", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("omega_c")
    return p


def _inputs(args) -> Dict[str, Any]:
    skip = {"command", "json", "func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None and v is not False and v != []}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        rep = COMMANDS[args.command](args)
        verdict = rep.verdict
        body = rep.to_dict()
    except (ParseError, UsageError, ValueError, ZeroDivisionError, OSError) as exc:
        verdict = "error"
        body = {"kind": args.command, "verdict": "error", "failures": [], "data": {}, "notes": [], "error": str(exc)}
        rep = None
    elapsed = time.perf_counter() - start
    if args.json:
        doc = {"schema": SCHEMA, "command": args.command, "input": jsonable(_inputs(args))}
        doc.update(body)
        doc["timing"] = {"seconds": round(elapsed, 6)}
        out.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    elif rep is None:
        print(f"error: {body['error']}", file=sys.stderr)
    else:
        out.write(str(rep) + "\n")
    return EXIT[verdict]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
