"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

Every check runs at its stated degree bound with exact arithmetic, so there
is no numeric tolerance; the only bounds are runtimes.
"""

import time
from contextlib import contextmanager
from math import comb

import pytest
import sympy

from conftest import ACCEPTANCE_LINES
from duflokit import checks
from duflokit.cli import main
from duflokit.duflo import duflo_coefficients, duflo_map
from duflokit.envalg import EnvElement, symmetrize_by_permutations
from duflokit.liealg import SUITE_CATALOG, resolve_algebra
from duflokit.sympoly import SymPolynomial, bracket_span, invariants_basis

from test_duflo import naive_log_coeffs

pytestmark = pytest.mark.slow


@contextmanager
def criterion(number, title, max_seconds=None):
    t0 = time.perf_counter()
    detail = ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        if max_seconds is not None and elapsed >= max_seconds:
            raise AssertionError(f"took {elapsed:.1f}s, bound {max_seconds}s")
        status = "PASS"
    except BaseException as exc:
        elapsed = time.perf_counter() - t0
        status, detail = "FAIL", f"  ({type(exc).__name__}: {str(exc).splitlines()[0][:100]})"
        raise
    finally:
        bound = f" < {max_seconds}s" if max_seconds is not None else ""
        ACCEPTANCE_LINES.append(f"[{status}] {number:>2}. {title}: {elapsed:.2f}s{bound}{detail}")


_REPORTS = {}


def report(check_id, algebra, degree, **kw):
    key = (check_id, algebra, degree, tuple(sorted(kw.items())))
    if key not in _REPORTS:
        _REPORTS[key] = checks.run_check(checks.CheckSpec(check_id, algebra, degree, **kw))
    return _REPORTS[key]


def assert_pass(rep):
    bad = [c for c in rep["cases"] if c["outcome"] != "pass"]
    assert rep["status"] == "pass", f"{rep['check']} on {rep['algebra']}: {bad[:1]}"


def test_c01_coefficients():
    with criterion(1, "coefficients alpha_2 = 1/48, alpha_4 = -1/5760 vs two oracles", 1):
        duflo_coefficients.cache_clear()
        a = duflo_coefficients(8)
        assert (a[2], a[4]) == (sympy.Rational(1, 48), sympy.Rational(-1, 5760))
        series = naive_log_coeffs(5)
        for k in (2, 4, 6, 8):
            assert a[k] == series[k]
            b = sympy.bernoulli(k) / (2 * k * sympy.factorial(k))
            assert a[k] == b


def test_c02_pbw_suite():
    with criterion(2, "PBW round trip, module map, confluence to degree 5 (100 samples)", 30):
        for name in SUITE_CATALOG:
            for cid in ("pbw-roundtrip", "pbw-module-map", "pbw-confluence"):
                rep = report(cid, name, 5, samples=100)
                assert rep["samples"] >= 100
                assert_pass(rep)


def test_c03_duflo_homomorphism():
    with criterion(3, "Duflo map is multiplicative on invariants (sl2 to 8, gl2 to 4)", 120):
        rep = report("duflo-hom", "sl2", 8)
        assert_pass(rep)
        # Omega^i for i <= 4 are all present
        assert rep["invariant_basis_size"] == 5
        assert_pass(report("duflo-hom", "gl(2)", 4))


def test_c04_defect_in_g_span():
    with criterion(4, "c(alpha, beta) has a g-span witness on the degree-4 grid", 300):
        for name in SUITE_CATALOG:
            rep = report("extract-c", name, 4)
            assert_pass(rep)
            assert all(c["containment"] == "g-span" for c in rep["cases"])
            assert rep["counts"]["flag"] == 0
            h0 = report("h0-compat", name, 4)
            assert all(c["coinvariant_classes"] for c in h0["cases"])


def test_c05_corollary_both_sides():
    with criterion(5, "phi_D(ab + c) = phi_D(a) phi_D(b) on the same grid"):
        for name in SUITE_CATALOG:
            rep = report("h0-compat", name, 4)
            assert_pass(rep)
            assert all(c["corollary"] for c in rep["cases"])


def test_c06_star_structure():
    with criterion(6, "star products associative and first order, both flavors", 60):
        for name in SUITE_CATALOG:
            rep = report("star-assoc", name, 3)
            assert rep["samples"] >= 50
            for flavor in ("gutt", "duflo"):
                assert sum(c["flavor"] == flavor for c in rep["cases"]) >= 50
            assert_pass(rep)
            assert_pass(report("star-first-order", name, 3))


def test_c07_commutant():
    with criterion(7, "star commutators lie in the full bracket span (degree 3)"):
        for name in SUITE_CATALOG:
            assert_pass(report("commutant", name, 3))


def test_c08_semisimple_decomposition():
    with criterion(8, "S^k(sl2) = invariants + g-span for k <= 6", 10):
        assert_pass(report("semisimple-decomp", "sl2", 6))
        sl2 = resolve_algebra("sl2")
        for k in range(7):
            inv = invariants_basis(sl2, k).dim
            span = bracket_span(sl2, k, "g-bracket-span").dim
            assert inv == (1 if k % 2 == 0 else 0)
            assert inv + span == (k + 1) * (k + 2) // 2 == comb(k + 2, 2)


def test_c09_golden_value():
    with criterion(9, "phi_D(h^2 + 4ef) = h^2 + 4ef - 2h + 1"):
        sl2 = resolve_algebra("sl2")
        omega = SymPolynomial(3, {(0, 2, 0): 1, (1, 0, 1): 4})
        expected = EnvElement(3, {(1, 1): 1, (0, 2): 4, (1,): -2, (): 1})
        assert duflo_map(sl2, omega) == expected
        # independent route: strange map adds 1, then average over orderings
        assert symmetrize_by_permutations(sl2, omega + 1, "leftmost") == expected


def test_c10_odd_traces():
    with criterion(10, "odd Tr_k (k = 1, 3, 5) kill invariants of degree <= 6 [empirical]"):
        for name in SUITE_CATALOG:
            rep = report("odd-traces", name, 6)
            assert rep["empirical"] is True
            assert_pass(rep)


def test_c11_full_suite(tmp_path, capsys):
    with criterion(11, "suite --max-degree 4 exits 0", 600):
        out = tmp_path / "suite.json"
        code = main(["suite", "--max-degree", "4", "--out", str(out)])
        capsys.readouterr()
        assert code == 0
