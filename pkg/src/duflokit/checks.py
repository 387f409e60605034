"""Verification checks over the algebra catalog.

Each check takes a :class:`CheckSpec` and returns a plain-dict report that
serializes to stable JSON.  Identities quantified over monomial bases are
checked exhaustively; triple-quantified ones are sampled with a seeded RNG.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import duflo as D
from .envalg import EnvElement, FreeWordExpression, enveloping, symmetrize_by_permutations
from .liealg import LieAlgebra, SUITE_CATALOG, resolve_algebra, validate
from .sympoly import (
    SymPolynomial,
    adjoint_action,
    apply_operator,
    bracket_span,
    coinvariant_projection,
    invariants_basis,
    monomials,
    poisson_bracket,
)

log = logging.getLogger(__name__)

CHECK_IDS = (
    "jacobi",
    "pbw-roundtrip",
    "pbw-confluence",
    "pbw-module-map",
    "star-assoc",
    "star-first-order",
    "duflo-hom",
    "h0-compat",
    "extract-c",
    "commutant",
    "semisimple-decomp",
    "odd-traces",
    "coinvariant-dims",
)

DEFAULT_MAX_DEGREE = 6
MIN_SAMPLES = 50


class CheckError(ValueError):
    """Unknown check id or unusable check parameters."""


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    algebra: str
    max_degree: int = DEFAULT_MAX_DEGREE
    seed: int = 0
    samples: int = 100

    def to_json(self) -> dict:
        return {
            "check": self.check_id,
            "algebra": self.algebra,
            "max_degree": self.max_degree,
            "seed": self.seed,
        }


class _Cases:
    """Accumulates per-case records and outcome counts."""

    def __init__(self):
        self.records: list = []
        self.counts = {"pass": 0, "fail": 0, "flag": 0}

    def add(self, outcome: str | bool, **record):
        if isinstance(outcome, bool):
            outcome = "pass" if outcome else "fail"
        self.counts[outcome] += 1
        self.records.append({"outcome": outcome, **record})

    @property
    def status(self) -> str:
        if self.counts["fail"]:
            return "fail"
        if self.counts["flag"]:
            return "flag"
        return "pass"


def _fmt(alg: LieAlgebra, x) -> str:
    return x.format(alg.basis)


def _mono(n: int, e) -> SymPolynomial:
    return SymPolynomial._raw(n, {tuple(e): Fraction(1)})


def all_monomials(n: int, max_degree: int) -> list[SymPolynomial]:
    return [_mono(n, e) for k in range(max_degree + 1) for e in monomials(n, k)]


def random_poly(rng: random.Random, n: int, max_degree: int, nterms: int = 3) -> SymPolynomial:
    """A few monomials of degree <= max_degree with small rational coefficients."""
    terms = {}
    for _ in range(nterms):
        k = rng.randint(0, max_degree)
        e = [0] * n
        for _ in range(k):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))
    return SymPolynomial(n, terms)


def random_env(rng: random.Random, n: int, max_degree: int, nterms: int = 3) -> EnvElement:
    terms = {}
    for _ in range(nterms):
        k = rng.randint(0, max_degree)
        w = tuple(sorted(rng.randrange(n) for _ in range(k)))
        terms[w] = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))
    return EnvElement(n, terms)


def invariant_basis_upto(alg: LieAlgebra, max_degree: int) -> list[SymPolynomial]:
    out = []
    for k in range(max_degree + 1):
        out.extend(invariants_basis(alg, k).basis_polynomials())
    return out


# --------------------------------------------------------------------- checks


def _check_jacobi(alg, spec, rng, cases):
    rep = validate(alg)
    cases.add(rep.ok, **rep.to_json())


def _check_pbw_roundtrip(alg, spec, rng, cases):
    U = enveloping(alg)
    n = alg.dim
    for m in all_monomials(n, spec.max_degree):
        ok = U.inverse(U.symmetrize(m)) == m
        # independent route: every distinct ordering with multinomial weights
        if ok and m.degree() <= min(spec.max_degree, 5):
            ok = symmetrize_by_permutations(alg, m) == U.symmetrize(m)
        cases.add(ok, kind="monomial", input=_fmt(alg, m))
    for _ in range(spec.samples):
        u = random_env(rng, n, spec.max_degree)
        cases.add(U.symmetrize(U.inverse(u)) == u, kind="sampled", input=_fmt(alg, u))
    return {"samples": spec.samples}


def _check_pbw_confluence(alg, spec, rng, cases):
    U = enveloping(alg)
    n = alg.dim
    length = max(spec.max_degree, 6)
    for _ in range(spec.samples):
        w = tuple(rng.randrange(n) for _ in range(rng.randint(0, length)))
        expr = FreeWordExpression.word(n, w)
        forms = {s: U.normal_form(expr, s) for s in ("leftmost", "rightmost", "memo")}
        ok = forms["leftmost"] == forms["rightmost"] == forms["memo"]
        cases.add(ok, word=[alg.basis[i] for i in w])
    return {"samples": spec.samples, "max_word_length": length}


def _check_pbw_module_map(alg, spec, rng, cases):
    U = enveloping(alg)
    n = alg.dim

    def one(f):
        sf = U.symmetrize(f)
        return all(
            U.symmetrize(adjoint_action(alg, i, f)) == U.module_action(i, sf) for i in range(n)
        )

    for m in all_monomials(n, spec.max_degree):
        cases.add(one(m), kind="monomial", input=_fmt(alg, m))
    for _ in range(spec.samples):
        f = random_poly(rng, n, spec.max_degree)
        cases.add(one(f), kind="sampled", input=_fmt(alg, f))
    return {"samples": spec.samples}


def _star_degree(spec) -> int:
    return min(spec.max_degree, 3)


def _check_star_assoc(alg, spec, rng, cases):
    n = alg.dim
    d = _star_degree(spec)
    samples = max(spec.samples, MIN_SAMPLES)
    for flavor in ("gutt", "duflo"):
        for _ in range(samples):
            a, b, c = (random_poly(rng, n, d, nterms=2) for _ in range(3))
            left = D.star_product(alg, D.star_product(alg, a, b, flavor), c, flavor)
            right = D.star_product(alg, a, D.star_product(alg, b, c, flavor), flavor)
            unit = D.star_product(alg, SymPolynomial.one(n), a, flavor) == a
            cases.add(left == right and unit, flavor=flavor,
                      input=[_fmt(alg, a), _fmt(alg, b), _fmt(alg, c)])
    return {"samples": samples, "factor_degree": d}


def _check_star_first_order(alg, spec, rng, cases):
    n = alg.dim
    mons = all_monomials(n, _star_degree(spec))
    for flavor in ("gutt", "duflo"):
        for p, a in enumerate(mons):
            for b in mons[p:]:
                ab = D.star_product(alg, a, b, flavor)
                ba = D.star_product(alg, b, a, flavor)
                top = a.degree() + b.degree()
                ok = ab.component(top) == a * b
                ok = ok and (ab - ba).component(top - 1) == poisson_bracket(alg, a, b)
                cases.add(ok, flavor=flavor, input=[_fmt(alg, a), _fmt(alg, b)])


def _check_commutant(alg, spec, rng, cases):
    n = alg.dim
    mons = all_monomials(n, _star_degree(spec))
    for p, a in enumerate(mons):
        for b in mons[p + 1:]:
            comm = D.star_product(alg, a, b, "duflo") - D.star_product(alg, b, a, "duflo")
            ok = all(
                bracket_span(alg, k, "full-bracket-span").contains(piece)
                for k, piece in comm.components().items()
            )
            cases.add(ok, input=[_fmt(alg, a), _fmt(alg, b)], commutator=_fmt(alg, comm))


def _check_duflo_hom(alg, spec, rng, cases):
    U = enveloping(alg)
    inv = invariant_basis_upto(alg, spec.max_degree)
    for p, a in enumerate(inv):
        for b in inv[p:]:
            if a.degree() + b.degree() > spec.max_degree:
                continue
            lhs = U.product(D.duflo_map(alg, a), D.duflo_map(alg, b))
            rhs = D.duflo_map(alg, a * b)
            cases.add(lhs == rhs, alpha=_fmt(alg, a), beta=_fmt(alg, b))
    return {"invariant_basis_size": len(inv)}


def _c_grid(alg, spec):
    inv = invariant_basis_upto(alg, spec.max_degree)
    mons = all_monomials(alg.dim, spec.max_degree)
    return [(a, b) for a in inv for b in mons]


_OUTCOME = {"g-span": "pass", "S-span": "flag", "none": "fail"}


def _check_extract_c(alg, spec, rng, cases):
    for a, b in _c_grid(alg, spec):
        res = D.extract_c(alg, a, b)
        outcome = _OUTCOME[res.containment]
        if outcome == "pass" and res.reconstruct(alg) != res.c:
            outcome = "fail"
        cases.add(
            outcome,
            alpha=a.to_json(),
            beta=b.to_json(),
            c=res.c.to_json(),
            witness=[[lab, str(x)] for lab, x in res.witness],
            containment=res.containment,
        )


def _check_h0_compat(alg, spec, rng, cases):
    U = enveloping(alg)
    for a, b in _c_grid(alg, spec):
        res = D.extract_c(alg, a, b)
        if res.containment != "g-span":
            cases.add(_OUTCOME[res.containment], alpha=_fmt(alg, a), beta=_fmt(alg, b),
                      containment=res.containment)
            continue
        # left side: c rebuilt bracket by bracket from the witness, pushed through phi_D
        c_rebuilt = res.reconstruct(alg)
        left = D.duflo_map(alg, a * b + c_rebuilt)
        right = U.product(D.duflo_map(alg, a), D.duflo_map(alg, b))
        eq21 = left == right
        # the same statement read on coinvariants, degree by degree
        pulled = D.duflo_inverse(alg, right)
        top = max(pulled.degree(), (a * b).degree(), 0)
        classes = all(
            coinvariant_projection(alg, pulled.component(k), k)
            == coinvariant_projection(alg, (a * b).component(k), k)
            for k in range(top + 1)
        )
        cases.add(eq21 and classes, alpha=_fmt(alg, a), beta=_fmt(alg, b),
                  corollary=eq21, coinvariant_classes=classes)


def _check_semisimple_decomp(alg, spec, rng, cases):
    for k in range(spec.max_degree + 1):
        inv = invariants_basis(alg, k)
        span = bracket_span(alg, k, "g-bracket-span")
        total = comb(alg.dim + k - 1, k)
        meet = inv.basis.intersection_dim(span.basis)
        cases.add(inv.dim + span.dim == total and meet == 0, degree=k,
                  invariants=inv.dim, g_bracket_span=span.dim, ambient=total, intersection=meet)


def _check_odd_traces(alg, spec, rng, cases):
    for k in (1, 3, 5):
        tr = D.trace_element(alg, k)
        for f in invariant_basis_upto(alg, spec.max_degree):
            out = apply_operator(tr, f)
            cases.add(not out, k=k, invariant=_fmt(alg, f), result=_fmt(alg, out),
                      trace_element_zero=not tr)
    return {"empirical": True}


def _check_coinvariant_dims(alg, spec, rng, cases):
    for k in range(spec.max_degree + 1):
        inv = invariants_basis(alg, k)
        g_span = bracket_span(alg, k, "g-bracket-span")
        s_span = bracket_span(alg, k, "full-bracket-span")
        total = comb(alg.dim + k - 1, k)
        nested = s_span.basis.contains_subspace(g_span.basis)
        ok = nested and all(not adjoint_action(alg, i, f)
                            for f in inv.basis_polynomials() for i in range(alg.dim))
        cases.add(ok, degree=k, ambient=total, invariants=inv.dim, g_bracket_span=g_span.dim,
                  full_bracket_span=s_span.dim, coinvariants=total - g_span.dim,
                  spans_equal=g_span.dim == s_span.dim)


_DISPATCH = {
    "jacobi": _check_jacobi,
    "pbw-roundtrip": _check_pbw_roundtrip,
    "pbw-confluence": _check_pbw_confluence,
    "pbw-module-map": _check_pbw_module_map,
    "star-assoc": _check_star_assoc,
    "star-first-order": _check_star_first_order,
    "duflo-hom": _check_duflo_hom,
    "h0-compat": _check_h0_compat,
    "extract-c": _check_extract_c,
    "commutant": _check_commutant,
    "semisimple-decomp": _check_semisimple_decomp,
    "odd-traces": _check_odd_traces,
    "coinvariant-dims": _check_coinvariant_dims,
}


def run_check(spec: CheckSpec, timing: bool = False) -> dict:
    """Run one check and return its report.

    Reports are deterministic in ``spec``; wall time is only included when
    ``timing`` is set.
    """
    if spec.check_id not in _DISPATCH:
        raise CheckError(f"unknown check id {spec.check_id!r}")
    if spec.max_degree < 0:
        raise CheckError("max_degree must be non-negative")
    alg = resolve_algebra(spec.algebra)
    if spec.check_id != "jacobi":
        rep = validate(alg)
        if not rep.ok:
            # only the jacobi check may report on a bracket that is not a Lie bracket
            raise CheckError(f"invalid algebra {alg.name}: {rep.message}")
    rng = random.Random(f"{spec.check_id}:{spec.algebra}:{spec.max_degree}:{spec.seed}")
    cases = _Cases()
    t0 = time.perf_counter()
    extra = _DISPATCH[spec.check_id](alg, spec, rng, cases) or {}
    elapsed = time.perf_counter() - t0
    log.info("%s on %s (degree %d): %s in %.2fs", spec.check_id, spec.algebra,
             spec.max_degree, cases.status, elapsed)
    report = {
        **spec.to_json(),
        "algebra_name": alg.name,
        "status": cases.status,
        "counts": dict(cases.counts),
        **extra,
        "cases": cases.records,
    }
    if timing:
        report["wall_time"] = round(elapsed, 3)
    return report


# ---------------------------------------------------------------------- suite


def suite_battery(max_degree: int = 4) -> list[CheckSpec]:
    """The full acceptance battery, scaled from ``max_degree`` (default 4).

    Most checks run at ``max_degree``; the PBW checks go one degree further,
    the Duflo homomorphism on sl2 to twice the bound, and the semisimple and
    odd-trace reports two degrees further.
    """
    d = max_degree
    specs = []
    for name in SUITE_CATALOG:
        specs += [
            CheckSpec("jacobi", name, d),
            CheckSpec("pbw-roundtrip", name, d + 1),
            CheckSpec("pbw-confluence", name, d + 1),
            CheckSpec("pbw-module-map", name, d + 1),
            CheckSpec("star-assoc", name, min(d, 3)),
            CheckSpec("star-first-order", name, min(d, 3)),
            CheckSpec("commutant", name, min(d, 3)),
            CheckSpec("duflo-hom", name, 2 * d if name == "sl2" else d),
            CheckSpec("extract-c", name, d),
            CheckSpec("h0-compat", name, d),
            CheckSpec("odd-traces", name, d + 2),
            CheckSpec("coinvariant-dims", name, d),
        ]
    specs.append(CheckSpec("semisimple-decomp", "sl2", d + 2))
    return specs


def _run_one(args):
    spec, timing = args
    return run_check(spec, timing)


def run_suite(max_degree: int = 4, seed: int = 0, jobs: int = 1, timing: bool = False) -> dict:
    specs = [
        CheckSpec(s.check_id, s.algebra, s.max_degree, seed, s.samples)
        for s in suite_battery(max_degree)
    ]
    t0 = time.perf_counter()
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            reports = list(pool.map(_run_one, [(s, timing) for s in specs]))
    else:
        reports = [run_check(s, timing) for s in specs]
    statuses = [r["status"] for r in reports]
    status = "fail" if "fail" in statuses else "flag" if "flag" in statuses else "pass"
    out = {
        "suite": True,
        "max_degree": max_degree,
        "seed": seed,
        "status": status,
        "counts": {k: statuses.count(k) for k in ("pass", "fail", "flag")},
        "checks": reports,
    }
    if timing:
        out["wall_time"] = round(time.perf_counter() - t0, 3)
    return out
