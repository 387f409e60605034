"""The symmetric algebra S(g) with its Kostant-Kirillov Poisson bracket.

Polynomials are sparse maps from exponent tuples to Fractions.  The monomial
order is graded-lex with the algebra's basis order: higher total degree
first, then lexicographically larger exponent vectors first (so ``x0`` beats
``x1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Iterable

from .exactlin import SubspaceBasis, membership
from .liealg import LieAlgebra, parse_fraction

__all__ = [
    "SymPolynomial",
    "DualPolynomial",
    "GradedSubspace",
    "poisson_bracket",
    "adjoint_action",
    "apply_operator",
    "monomials",
    "invariants_basis",
    "bracket_span",
    "coinvariant_projection",
    "coinvariant_complement",
    "FLAVORS",
]


def _key(e: tuple) -> tuple:
    return (-sum(e), tuple(-x for x in e))


class _Sparse:
    """Shared machinery for S(g) and S(g*) elements."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        clean = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                e = tuple(e)
                if len(e) != dim:
                    raise ValueError(f"exponent vector {e} has length {len(e)}, expected {dim}")
                if isinstance(c, float):
                    raise TypeError("floating point coefficients are not allowed")
                c = clean.get(e, 0) + Fraction(c)
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: dict):
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors
    @classmethod
    def zero(cls, dim: int):
        return cls._raw(dim, {})

    @classmethod
    def one(cls, dim: int):
        return cls.constant(dim, 1)

    @classmethod
    def constant(cls, dim: int, c):
        c = Fraction(c)
        return cls._raw(dim, {(0,) * dim: c} if c else {})

    @classmethod
    def gen(cls, dim: int, i: int):
        e = [0] * dim
        e[i] = 1
        return cls._raw(dim, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps, coeff=1):
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    # -- basic protocol
    def _check(self, other):
        if not isinstance(other, type(self)):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == type(self).constant(self.dim, other)
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.dim, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Terms in canonical order."""
        return sorted(self.terms.items(), key=lambda t: _key(t[0]))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self).constant(self.dim, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return type(self)._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self).constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        s = Fraction(s)
        if not s:
            return type(self).zero(self.dim)
        return type(self)._raw(self.dim, {e: c * s for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return type(self)._raw(self.dim, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, s):
        return self.scale(1 / Fraction(s))

    def __pow__(self, n: int):
        out = type(self).one(self.dim)
        for _ in range(n):
            out = out * self
        return out

    # -- grading
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def component(self, k: int):
        return type(self)._raw(self.dim, {e: c for e, c in self.terms.items() if sum(e) == k})

    def components(self) -> dict:
        """Nonzero graded pieces keyed by degree."""
        out: dict = {}
        for e, c in self.terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {k: type(self)._raw(self.dim, t) for k, t in sorted(out.items())}

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def diff(self, i: int):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return type(self)._raw(self.dim, out)

    # -- display / serialization
    _var_prefix = ""

    def format(self, names: Iterable[str] | None = None) -> str:
        names = list(names) if names is not None else [f"x{i}" for i in range(self.dim)]
        names = [self._var_prefix + n for n in names]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"{type(self).__name__}({self.format()})"

    def to_json(self) -> dict:
        return {"terms": [{"exps": list(e), "coeff": str(c)} for e, c in self.items()]}

    @classmethod
    def from_json(cls, data: dict, dim: int | None = None):
        try:
            raw = data["terms"]
        except (KeyError, TypeError):
            raise ValueError("polynomial JSON needs a 'terms' list") from None
        terms = []
        for t in raw:
            e = t["exps"]
            if not all(isinstance(a, int) and a >= 0 for a in e):
                raise ValueError(f"bad exponent vector {e!r}")
            terms.append((tuple(e), parse_fraction(t["coeff"])))
        if dim is None:
            if not terms:
                raise ValueError("cannot infer the dimension of an empty polynomial")
            dim = len(terms[0][0])
        return cls(dim, terms)


class SymPolynomial(_Sparse):
    """An element of S(g)."""

    __slots__ = ()


class DualPolynomial(_Sparse):
    """An element of S(g*), i.e. a constant-coefficient differential operator."""

    __slots__ = ()
    _var_prefix = "d"


# ------------------------------------------------------------ operations


def poisson_bracket(alg: LieAlgebra, f: SymPolynomial, h: SymPolynomial) -> SymPolynomial:
    """Kostant-Kirillov bracket: sum_{i<j,k} c_ij^k x_k (f_i h_j - f_j h_i)."""
    if f.dim != alg.dim or h.dim != alg.dim:
        raise ValueError("dimension mismatch between polynomial and algebra")
    n = alg.dim
    out = SymPolynomial.zero(n)
    if not f or not h:
        return out
    df = [f.diff(i) for i in range(n)]
    dh = [h.diff(i) for i in range(n)]
    for (i, j), combo in alg.stored_brackets.items():
        w = df[i] * dh[j] - df[j] * dh[i]
        if not w:
            continue
        lin = SymPolynomial(n, {_unit(n, k): c for k, c in combo.items()})
        out = out + lin * w
    return out


def _unit(n, k):
    e = [0] * n
    e[k] = 1
    return tuple(e)


def adjoint_action(alg: LieAlgebra, i: int, f: SymPolynomial) -> SymPolynomial:
    """``x_i . f`` = {x_i, f}, i.e. the derivation extending ad x_i."""
    if not 0 <= i < alg.dim:
        raise IndexError(f"generator index {i} out of range")
    if f.dim != alg.dim:
        raise ValueError("dimension mismatch between polynomial and algebra")
    out: dict = {}
    for e, c in f.terms.items():
        for j, a in enumerate(e):
            if not a:
                continue
            for k, ck in alg.bracket(i, j).items():
                g = list(e)
                g[j] -= 1
                g[k] += 1
                g = tuple(g)
                v = out.get(g, 0) + c * a * ck
                if v:
                    out[g] = v
                else:
                    del out[g]
    return SymPolynomial._raw(alg.dim, out)


def apply_operator(op: DualPolynomial, f: SymPolynomial) -> SymPolynomial:
    """Act by prod (d/dx_i)^{a_i} for each dual monomial prod (x_i*)^{a_i}."""
    if op.dim != f.dim:
        raise ValueError(f"dimension mismatch: {op.dim} vs {f.dim}")
    out: dict = {}
    for a, ca in op.terms.items():
        for e, ce in f.terms.items():
            if any(x < y for x, y in zip(e, a)):
                continue
            w = ca * ce
            for x, y in zip(e, a):
                if y:
                    w *= factorial(x) // factorial(x - y)
            g = tuple(x - y for x, y in zip(e, a))
            v = out.get(g, 0) + w
            if v:
                out[g] = v
            else:
                del out[g]
    return SymPolynomial._raw(f.dim, out)


@lru_cache(maxsize=None)
def monomials(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree k in n variables, in canonical order."""
    out = []
    for idx in combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in idx:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=_key)
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(n: int, k: int) -> dict:
    return {e: j for j, e in enumerate(monomials(n, k))}


def _coords(f: SymPolynomial, k: int) -> dict:
    idx = _monomial_index(f.dim, k)
    return {idx[e]: c for e, c in f.terms.items()}


def _from_coords(n: int, k: int, v) -> SymPolynomial:
    mons = monomials(n, k)
    items = v.items() if isinstance(v, dict) else enumerate(v)
    return SymPolynomial._raw(n, {mons[j]: Fraction(c) for j, c in items if c})


FLAVORS = ("invariants", "g-bracket-span", "full-bracket-span")


@dataclass(frozen=True, eq=False)
class GradedSubspace:
    """A subspace of S^k(g) in monomial coordinates, with labelled generators."""

    alg: LieAlgebra
    degree: int
    flavor: str
    generators: tuple[SymPolynomial, ...]
    basis: SubspaceBasis

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def labels(self) -> tuple[str, ...]:
        return self.basis.labels

    def ambient_dim(self) -> int:
        return comb(self.alg.dim + self.degree - 1, self.degree)

    def basis_polynomials(self) -> list[SymPolynomial]:
        n, k = self.alg.dim, self.degree
        return [_from_coords(n, k, r) for r in self.basis.basis_rows.sparse_rows()]

    def contains(self, f: SymPolynomial) -> bool:
        return self.witness(f) is not None

    def witness(self, f: SymPolynomial) -> list[tuple[str, Fraction]] | None:
        """Nonzero generator coefficients reconstructing ``f``, or None."""
        if not f.is_homogeneous(self.degree):
            raise ValueError(f"polynomial is not homogeneous of degree {self.degree}")
        w = membership(_coords(f, self.degree), self.basis)
        if w is None:
            return None
        return [(lab, c) for lab, c in zip(self.labels, w) if c]

    def reconstruct(self, witness) -> SymPolynomial:
        by_label = dict(zip(self.labels, self.generators))
        out = SymPolynomial.zero(self.alg.dim)
        for lab, c in witness:
            out = out + by_label[lab].scale(c)
        return out


def _mono_label(alg: LieAlgebra, e: tuple) -> str:
    return SymPolynomial._raw(alg.dim, {e: Fraction(1)}).format(alg.basis)


@lru_cache(maxsize=None)
def invariants_basis(alg: LieAlgebra, k: int) -> GradedSubspace:
    """[S^k(g)]^g as the joint kernel of the adjoint operators."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    n = alg.dim
    mons = monomials(n, k)
    idx = _monomial_index(n, k)
    # row (i, target monomial), column = source monomial
    rows: dict = {}
    for j, e in enumerate(mons):
        src = SymPolynomial._raw(n, {e: Fraction(1)})
        for i in range(n):
            for t, c in adjoint_action(alg, i, src).terms.items():
                rows.setdefault((i, idx[t]), {})[j] = c
    from .exactlin import _kernel_from_sparse

    ker = _kernel_from_sparse([rows[key] for key in sorted(rows)], len(mons))
    gens = tuple(_from_coords(n, k, v) for v in ker.generators)
    return GradedSubspace(alg, k, "invariants", gens, ker)


@lru_cache(maxsize=None)
def bracket_span(alg: LieAlgebra, k: int, flavor: str) -> GradedSubspace:
    """{g, S^k} or {S, S} intersected with S^k.

    ``g-bracket-span`` is generated by {x_i, m} with m a degree-k monomial;
    ``full-bracket-span`` by {m1, m2} with deg m1 + deg m2 = k + 1.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    n = alg.dim
    gens, labels = [], []
    if flavor == "g-bracket-span":
        for i in range(n):
            for e in monomials(n, k):
                gens.append(adjoint_action(alg, i, SymPolynomial._raw(n, {e: Fraction(1)})))
                labels.append(f"{{{alg.basis[i]}, {_mono_label(alg, e)}}}")
    elif flavor == "full-bracket-span":
        for a in range(1, k + 1):
            b = k + 1 - a
            if a > b:
                break
            for p, e1 in enumerate(monomials(n, a)):
                m1 = SymPolynomial._raw(n, {e1: Fraction(1)})
                for q, e2 in enumerate(monomials(n, b)):
                    if a == b and q <= p:
                        continue
                    m2 = SymPolynomial._raw(n, {e2: Fraction(1)})
                    gens.append(poisson_bracket(alg, m1, m2))
                    labels.append(f"{{{_mono_label(alg, e1)}, {_mono_label(alg, e2)}}}")
    else:
        raise ValueError(f"unknown bracket-span flavor {flavor!r}")
    mons = len(monomials(n, k))
    basis = SubspaceBasis.from_spanning([_coords(g, k) for g in gens], mons, labels)
    return GradedSubspace(alg, k, flavor, tuple(gens), basis)


def coinvariant_complement(alg: LieAlgebra, k: int) -> list[tuple[int, ...]]:
    """Monomials (non-pivot coordinates) spanning the canonical complement of {g, S^k}."""
    span = bracket_span(alg, k, "g-bracket-span")
    mons = monomials(alg.dim, k)
    return [mons[c] for c in span.basis.free_cols()]


def coinvariant_projection(alg: LieAlgebra, f: SymPolynomial, k: int | None = None) -> SymPolynomial:
    """Canonical representative of the class of ``f`` in S^k / {g, S^k}.

    The result is supported on :func:`coinvariant_complement` monomials; two
    polynomials have the same image iff their difference is a sum of
    brackets with linear elements.
    """
    if f.dim != alg.dim:
        raise ValueError("dimension mismatch between polynomial and algebra")
    if k is None:
        k = max(f.degree(), 0)
    if not f.is_homogeneous(k):
        raise ValueError(f"polynomial is not homogeneous of degree {k}")
    span = bracket_span(alg, k, "g-bracket-span")
    rem = span.basis.reduce(_coords(f, k))
    return _from_coords(alg.dim, k, rem)
