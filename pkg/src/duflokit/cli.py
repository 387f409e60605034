"""Command-line entry point: ``duflokit <subcommand> ...``.

Exit codes: 0 success / all checks pass, 1 verification failure, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import checks
from .duflo import (
    StarFlavor,
    duflo_coefficients,
    duflo_inverse,
    duflo_map,
    star_product,
    strange_inverse,
    strange_map,
    trace_element,
)
from .envalg import EnvElement, enveloping
from .liealg import AlgebraError, catalog_names, resolve_algebra
from .sympoly import (
    SymPolynomial,
    bracket_span,
    coinvariant_complement,
    coinvariant_projection,
    invariants_basis,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("duflokit")


class UsageError(Exception):
    pass


def _read_json(src: str | None):
    if src is None or src == "-":
        text = sys.stdin.read()
    elif src.lstrip().startswith("{"):
        text = src
    else:
        try:
            text = Path(src).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {src}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON input: {exc}") from None


def parse_poly_text(text: str, alg) -> SymPolynomial:
    """Parse e.g. ``"h^2 + 4*e*f"`` over the algebra's basis names."""
    import sympy

    if "." in text:
        raise UsageError(f"decimal literals are not accepted, write fractions as p/q: {text!r}")
    syms = sympy.symbols(list(alg.basis))
    local = dict(zip(alg.basis, syms))
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=local, rational=True)
        poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None
    terms = {}
    for exps, c in poly.terms():
        r = sympy.Rational(c)
        terms[tuple(int(a) for a in exps)] = Fraction(int(r.p), int(r.q))
    return SymPolynomial(alg.dim, terms)


def _poly_input(args, alg) -> SymPolynomial:
    if getattr(args, "poly", None):
        return parse_poly_text(args.poly, alg)
    try:
        return SymPolynomial.from_json(_read_json(args.input), alg.dim)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad polynomial input: {exc}") from None


def _env_input(args, alg) -> EnvElement:
    try:
        return EnvElement.from_json(_read_json(args.input), alg.dim)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad EnvElement input: {exc}") from None


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _elem_payload(x, alg) -> dict:
    return {**x.to_json(), "text": x.format(alg.basis)}


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    spec = checks.CheckSpec(args.check_id, args.algebra, args.max_degree, args.seed, args.samples)
    report = checks.run_check(spec, timing=args.timing)
    _emit(report, args)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def cmd_suite(args) -> int:
    report = checks.run_suite(args.max_degree, args.seed, jobs=args.jobs, timing=args.timing)
    _emit(report, args)
    for r in report["checks"]:
        print(f"{r['status'].upper():4s}  {r['check']:18s} {r['algebra']:16s} "
              f"degree {r['max_degree']}  {r['counts']}", file=sys.stderr)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def cmd_apply(args) -> int:
    alg = resolve_algebra(args.algebra)
    U = enveloping(alg)
    if args.map in ("pbw-inv", "duflo-inv"):
        u = _env_input(args, alg)
        out = U.inverse(u) if args.map == "pbw-inv" else duflo_inverse(alg, u)
    else:
        f = _poly_input(args, alg)
        out = {
            "pbw": U.symmetrize,
            "strange": lambda p: strange_map(alg, p),
            "strange-inv": lambda p: strange_inverse(alg, p),
            "duflo": lambda p: duflo_map(alg, p),
        }[args.map](f)
    _emit(_elem_payload(out, alg), args)
    return EXIT_OK


def cmd_star(args) -> int:
    alg = resolve_algebra(args.algebra)
    polys = []
    for src, text in ((args.left, args.left_poly), (args.right, args.right_poly)):
        if text:
            polys.append(parse_poly_text(text, alg))
        else:
            try:
                polys.append(SymPolynomial.from_json(_read_json(src), alg.dim))
            except (ValueError, KeyError, TypeError) as exc:
                raise UsageError(f"bad polynomial input: {exc}") from None
    out = star_product(alg, polys[0], polys[1], StarFlavor(args.flavor))
    _emit(_elem_payload(out, alg), args)
    return EXIT_OK


def cmd_invariants(args) -> int:
    alg = resolve_algebra(args.algebra)
    sub = invariants_basis(alg, args.degree)
    basis = sub.basis_polynomials()
    _emit({
        "algebra": alg.name,
        "degree": args.degree,
        "dim": sub.dim,
        "basis": [p.to_json() for p in basis],
        "text": [p.format(alg.basis) for p in basis],
    }, args)
    return EXIT_OK


def cmd_coinvariants(args) -> int:
    alg = resolve_algebra(args.algebra)
    k = args.degree
    comp = coinvariant_complement(alg, k)
    payload = {
        "algebra": alg.name,
        "degree": k,
        "dim": len(comp),
        "g_bracket_span_dim": bracket_span(alg, k, "g-bracket-span").dim,
        "complement": [list(e) for e in comp],
        "text": [SymPolynomial.monomial(e).format(alg.basis) for e in comp],
    }
    if args.input or args.poly:
        f = _poly_input(args, alg)
        try:
            cls = coinvariant_projection(alg, f, k)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        payload["class"] = _elem_payload(cls, alg)
    _emit(payload, args)
    return EXIT_OK


def cmd_trace(args) -> int:
    alg = resolve_algebra(args.algebra)
    tr = trace_element(alg, args.k)
    _emit({"algebra": alg.name, "k": args.k, **tr.to_json(), "text": tr.format(alg.basis)}, args)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    _emit(duflo_coefficients(args.max_k).to_json(), args)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.show:
        _emit(resolve_algebra(args.show).to_json(), args)
    else:
        for name in catalog_names():
            print(name)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _common(p, degree_default=None):
    p.add_argument("--algebra", default="sl2", help="catalog name or JSON algebra file")
    p.add_argument("--out", help="write JSON here instead of stdout")
    if degree_default is not None:
        p.add_argument("--max-degree", type=int, default=degree_default)
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="duflokit", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one verification check")
    p.add_argument("--check-id", required=True, choices=checks.CHECK_IDS)
    _common(p, checks.DEFAULT_MAX_DEGREE)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", help="run the full acceptance battery")
    p.add_argument("--out")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("apply", help="apply pbw / strange / duflo maps or their inverses")
    p.add_argument("--map", required=True,
                   choices=["pbw", "pbw-inv", "strange", "strange-inv", "duflo", "duflo-inv"])
    _common(p)
    p.add_argument("--input", help="JSON file, inline JSON, or '-' for stdin (default)")
    p.add_argument("--poly", help="polynomial as text, e.g. 'h^2 + 4*e*f'")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("star", help="transported star product of two polynomials")
    p.add_argument("--flavor", choices=[f.value for f in StarFlavor], default="duflo")
    _common(p)
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--left-poly")
    p.add_argument("--right-poly")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("invariants", help="basis of [S^k(g)]^g")
    p.add_argument("--degree", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("coinvariants", help="canonical complement of {g, S^k}, optional projection")
    p.add_argument("--degree", type=int, required=True)
    _common(p)
    p.add_argument("--input")
    p.add_argument("--poly")
    p.set_defaults(func=cmd_coinvariants)

    p = sub.add_parser("trace", help="trace element Tr_k as a dual polynomial")
    p.add_argument("--k", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("coeffs", help="series coefficients alpha_2k")
    p.add_argument("--max-k", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("catalog", help="list catalog algebras or dump one as JSON")
    p.add_argument("--list", action="store_true")
    p.add_argument("--show", metavar="NAME")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for name in ("degree", "k", "max_degree", "max_k"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            print(f"duflokit: error: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, AlgebraError, checks.CheckError) as exc:
        print(f"duflokit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # domain errors on user input (bad k, non-invariant alpha, ...)
        print(f"duflokit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
