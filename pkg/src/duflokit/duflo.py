"""The Duflo map and the star products it transports onto S(g).

    phi_D = pbw_symmetrize o strange_map,
    strange_map = exp(sum_k alpha_2k Tr_2k),
    sum_k alpha_2k x^2k = 1/2 log(sinh(x/2) / (x/2)).

Tr_k is the degree-k polynomial t -> tr((sum_i t_i ad x_i)^k) on g, used as a
constant-coefficient differential operator on S(g).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .envalg import EnvElement, enveloping
from .liealg import LieAlgebra, ad_matrix
from .sympoly import (
    DualPolynomial,
    SymPolynomial,
    adjoint_action,
    apply_operator,
    bracket_span,
)

__all__ = [
    "DufloCoefficients",
    "StarFlavor",
    "duflo_coefficients",
    "trace_element",
    "strange_map",
    "strange_inverse",
    "duflo_map",
    "duflo_inverse",
    "star_product",
    "extract_c",
    "CResult",
    "ComponentWitness",
    "NotInvariantError",
    "is_invariant",
]


# ------------------------------------------------------- series coefficients


def _series_div(a: list, b: list, n: int) -> list:
    # b[0] != 0
    q = [Fraction(0)] * n
    for k in range(n):
        s = a[k] if k < len(a) else Fraction(0)
        for j in range(1, k + 1):
            if j < len(b):
                s -= b[j] * q[k - j]
        q[k] = s / b[0]
    return q


def _half_log_sinhc(n: int) -> list:
    """Coefficients of 1/2 log((e^{x/2} - e^{-x/2})/x) through x^{n-1}.

    Uses (log s)' = s'/s and integrates term by term.
    """
    s = [Fraction(0)] * (n + 1)
    for m in range(0, n // 2 + 1):
        if 2 * m <= n:
            s[2 * m] = Fraction(1, 4**m * factorial(2 * m + 1))
    ds = [s[i + 1] * (i + 1) for i in range(n)]
    q = _series_div(ds, s, n)
    out = [Fraction(0)] * n
    for i in range(1, n):
        out[i] = q[i - 1] / i / 2
    return out


@dataclass(frozen=True)
class DufloCoefficients:
    max_k: int
    alpha: dict  # 2k -> Fraction

    def __getitem__(self, two_k: int) -> Fraction:
        return self.alpha[two_k]

    def to_json(self) -> dict:
        return {"max_k": self.max_k, "alpha": {str(k): str(v) for k, v in sorted(self.alpha.items())}}


@lru_cache(maxsize=None)
def duflo_coefficients(max_k: int) -> DufloCoefficients:
    """alpha_2k for 2k <= max_k; odd powers of the series vanish."""
    if max_k < 2:
        raise ValueError("max_k must be at least 2")
    max_k -= max_k % 2
    series = _half_log_sinhc(max_k + 1)
    assert all(not series[i] for i in range(1, max_k + 1, 2))
    return DufloCoefficients(max_k, {k: series[k] for k in range(2, max_k + 1, 2)})


# ------------------------------------------------------------ trace elements


@lru_cache(maxsize=None)
def _ad_power(alg: LieAlgebra, k: int) -> tuple:
    """(sum_i t_i ad x_i)^k as a matrix of dual polynomials."""
    n = alg.dim
    zero = DualPolynomial.zero(n)
    if k == 1:
        generic = [[zero] * n for _ in range(n)]
        for i in range(n):
            m = ad_matrix(alg, i)
            ti = DualPolynomial.gen(n, i)
            for r in range(n):
                for c in range(n):
                    if m[r, c]:
                        generic[r][c] = generic[r][c] + ti.scale(m[r, c])
        return tuple(map(tuple, generic))
    prev, base = _ad_power(alg, k - 1), _ad_power(alg, 1)
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = zero
            for j in range(n):
                if prev[r][j] and base[j][c]:
                    acc = acc + prev[r][j] * base[j][c]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


@lru_cache(maxsize=None)
def trace_element(alg: LieAlgebra, k: int) -> DualPolynomial:
    """Tr_k: the polynomial t -> tr((sum_i t_i ad x_i)^k) as an element of S^k(g*)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    power = _ad_power(alg, k)
    return sum((power[j][j] for j in range(alg.dim)), DualPolynomial.zero(alg.dim))


# -------------------------------------------------------------- strange map


def _exponent_operator(alg: LieAlgebra, max_degree: int, sign: int) -> DualPolynomial:
    op = DualPolynomial.zero(alg.dim)
    if max_degree < 2:
        return op
    coeffs = duflo_coefficients(max_degree)
    for two_k, a in coeffs.alpha.items():
        op = op + trace_element(alg, two_k).scale(sign * a)
    return op


def _exp_apply(op: DualPolynomial, f: SymPolynomial) -> SymPolynomial:
    # terminates: every term of op has degree >= 2
    out = f
    term = f
    m = 1
    while term:
        term = apply_operator(op, term).scale(Fraction(1, m))
        out = out + term
        m += 1
    return out


def strange_map(alg: LieAlgebra, f: SymPolynomial) -> SymPolynomial:
    """exp(sum_k alpha_2k Tr_2k) applied to f."""
    return _exp_apply(_exponent_operator(alg, f.degree(), 1), f)


def strange_inverse(alg: LieAlgebra, f: SymPolynomial) -> SymPolynomial:
    return _exp_apply(_exponent_operator(alg, f.degree(), -1), f)


# ---------------------------------------------------------------- Duflo map


@lru_cache(maxsize=65536)
def duflo_map(alg: LieAlgebra, f: SymPolynomial) -> EnvElement:
    """phi_D(f) = pbw_symmetrize(strange_map(f))."""
    return enveloping(alg).symmetrize(strange_map(alg, f))


def duflo_inverse(alg: LieAlgebra, u: EnvElement) -> SymPolynomial:
    return strange_inverse(alg, enveloping(alg).inverse(u))


class StarFlavor(str, enum.Enum):
    GUTT = "gutt"
    DUFLO = "duflo"


def _transport(alg: LieAlgebra, flavor: StarFlavor):
    U = enveloping(alg)
    if StarFlavor(flavor) is StarFlavor.GUTT:
        return U.symmetrize, U.inverse
    return (lambda f: duflo_map(alg, f)), (lambda u: duflo_inverse(alg, u))


@lru_cache(maxsize=65536)
def star_product(alg: LieAlgebra, a: SymPolynomial, b: SymPolynomial, flavor="duflo") -> SymPolynomial:
    """a * b = T^{-1}(T(a) T(b)) with T the PBW or the Duflo map."""
    if a.dim != alg.dim or b.dim != alg.dim:
        raise ValueError("dimension mismatch between polynomial and algebra")
    fwd, back = _transport(alg, flavor)
    return back(enveloping(alg).product(fwd(a), fwd(b)))


# ----------------------------------------------------------------- defect c


class NotInvariantError(ValueError):
    """extract_c was given a non-invariant alpha."""


def is_invariant(alg: LieAlgebra, f: SymPolynomial) -> bool:
    return all(not adjoint_action(alg, i, f) for i in range(alg.dim))


@dataclass(frozen=True)
class ComponentWitness:
    degree: int
    containment: str  # "g-span" | "S-span" | "none"
    witness: tuple  # ((label, Fraction), ...) over the span that held


@dataclass(frozen=True)
class CResult:
    alpha: SymPolynomial
    beta: SymPolynomial
    c: SymPolynomial
    components: tuple = field(default=())

    @property
    def containment(self) -> str:
        """Weakest containment over all graded pieces."""
        order = {"g-span": 0, "S-span": 1, "none": 2}
        worst = "g-span"
        for comp in self.components:
            if order[comp.containment] > order[worst]:
                worst = comp.containment
        return worst

    @property
    def witness(self) -> list:
        return [(lab, c) for comp in self.components for lab, c in comp.witness]

    def reconstruct(self, alg: LieAlgebra) -> SymPolynomial:
        """Rebuild c from the witnesses by recomputing every bracket."""
        out = SymPolynomial.zero(alg.dim)
        for comp in self.components:
            flavor = "g-bracket-span" if comp.containment == "g-span" else "full-bracket-span"
            if comp.containment == "none":
                continue
            out = out + bracket_span(alg, comp.degree, flavor).reconstruct(comp.witness)
        return out


def extract_c(alg: LieAlgebra, alpha: SymPolynomial, beta: SymPolynomial) -> CResult:
    """c(alpha, beta) = alpha * beta - alpha.beta, located in a bracket span.

    Each graded piece is first tested against {g, S^k}; if that fails the
    larger {S, S} span is tried and the weaker containment is reported.
    """
    if not is_invariant(alg, alpha):
        raise NotInvariantError("alpha is not ad-invariant")
    c = star_product(alg, alpha, beta, "duflo") - alpha * beta
    comps = []
    for k, piece in c.components().items():
        w = bracket_span(alg, k, "g-bracket-span").witness(piece)
        if w is not None:
            comps.append(ComponentWitness(k, "g-span", tuple(w)))
            continue
        w = bracket_span(alg, k, "full-bracket-span").witness(piece)
        if w is not None:
            comps.append(ComponentWitness(k, "S-span", tuple(w)))
        else:
            comps.append(ComponentWitness(k, "none", ()))
    return CResult(alpha, beta, c, tuple(comps))
