"""U(g) on the PBW basis.

Elements are sparse maps from weakly increasing index words to Fractions.
Normal forms are produced by the rewriting rule

    x_j x_i -> x_i x_j + [x_j, x_i]      (j > i)

which terminates because each step either lowers the word length or the
number of inversions.  The fast path multiplies a PBW word by one generator
at a time and memoizes those products per algebra.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, prod
from typing import Callable, Iterable

from .liealg import LieAlgebra, parse_fraction
from .sympoly import SymPolynomial, adjoint_action

__all__ = [
    "EnvElement",
    "FreeWordExpression",
    "Enveloping",
    "enveloping",
    "normal_form",
    "product",
    "commutator",
    "module_action",
    "pbw_symmetrize",
    "pbw_inverse",
    "symmetrize_by_permutations",
    "STRATEGIES",
]


def _acc(out: dict, key, val) -> None:
    v = out.get(key, 0) + val
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _word_key(w: tuple) -> tuple:
    return (-len(w), w)


class EnvElement:
    """An element of U(g) in PBW normal form."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        clean: dict = {}
        for w, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            w = tuple(w)
            if any(a > b for a, b in zip(w, w[1:])):
                raise ValueError(f"word {w} is not weakly increasing; use normal_form")
            if any(not 0 <= x < dim for x in w):
                raise ValueError(f"word {w} has a letter out of range")
            if isinstance(c, float):
                raise TypeError("floating point coefficients are not allowed")
            _acc(clean, w, Fraction(c))
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: dict) -> "EnvElement":
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, dim: int) -> "EnvElement":
        return cls._raw(dim, {})

    @classmethod
    def one(cls, dim: int) -> "EnvElement":
        return cls._raw(dim, {(): Fraction(1)})

    @classmethod
    def gen(cls, dim: int, i: int) -> "EnvElement":
        return cls._raw(dim, {(i,): Fraction(1)})

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if not isinstance(other, EnvElement):
            raise TypeError(f"cannot combine EnvElement with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return EnvElement._raw(self.dim, out)

    def __neg__(self):
        return EnvElement._raw(self.dim, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "EnvElement":
        s = Fraction(s)
        if not s:
            return EnvElement.zero(self.dim)
        return EnvElement._raw(self.dim, {w: c * s for w, c in self.terms.items()})

    def filtration_degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def items(self):
        return sorted(self.terms.items(), key=lambda t: _word_key(t[0]))

    def format(self, names: Iterable[str] | None = None) -> str:
        names = list(names) if names is not None else [f"x{i}" for i in range(self.dim)]
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.items():
            runs = []
            for x in w:
                if runs and runs[-1][0] == x:
                    runs[-1][1] += 1
                else:
                    runs.append([x, 1])
            mono = "*".join(names[x] if m == 1 else f"{names[x]}^{m}" for x, m in runs)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"EnvElement({self.format()})"

    def to_json(self) -> dict:
        return {"words": [{"word": list(w), "coeff": str(c)} for w, c in self.items()]}

    @classmethod
    def from_json(cls, data: dict, dim: int) -> "EnvElement":
        try:
            raw = data["words"]
        except (KeyError, TypeError):
            raise ValueError("EnvElement JSON needs a 'words' list") from None
        return cls(dim, [(tuple(t["word"]), parse_fraction(t["coeff"])) for t in raw])


class FreeWordExpression:
    """A formal combination of arbitrary generator words (before normal form)."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        clean: dict = {}
        for w, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            w = tuple(w)
            if any(not 0 <= x < dim for x in w):
                raise ValueError(f"word {w} has a letter out of range")
            _acc(clean, w, Fraction(c))
        self.terms = clean

    @classmethod
    def word(cls, dim: int, w, coeff=1) -> "FreeWordExpression":
        return cls(dim, {tuple(w): coeff})


class Enveloping:
    """Multiplication tables for U(g) of one algebra.

    The memo tables only ever grow and every entry is a pure function of its
    key, so sharing an instance is safe.
    """

    def __init__(self, alg: LieAlgebra):
        self.alg = alg
        self.dim = alg.dim
        self._table = alg.full_table
        self._rmul_memo: dict = {}
        self._lmul_memo: dict = {}
        self._sym_memo: dict = {}

    # -- word level
    def _rmul(self, word: tuple, i: int) -> dict:
        """PBW word times x_i, normal-formed."""
        if not word or word[-1] <= i:
            return {word + (i,): Fraction(1)}
        key = (word, i)
        hit = self._rmul_memo.get(key)
        if hit is not None:
            return hit
        j = word[-1]
        head = word[:-1]
        out: dict = {}
        # head x_j x_i = (head x_i) x_j + sum_k c_ji^k head x_k
        for w, c in self._rmul(head, i).items():
            for w2, c2 in self._rmul(w, j).items():
                _acc(out, w2, c * c2)
        for k, ck in self._table.get((j, i), {}).items():
            for w, c in self._rmul(head, k).items():
                _acc(out, w, ck * c)
        self._rmul_memo[key] = out
        return out

    def _lmul(self, i: int, word: tuple) -> dict:
        """x_i times PBW word, normal-formed."""
        if not word or i <= word[0]:
            return {(i,) + word: Fraction(1)}
        key = (i, word)
        hit = self._lmul_memo.get(key)
        if hit is not None:
            return hit
        j = word[0]
        tail = word[1:]
        out: dict = {}
        # x_i x_j tail = x_j (x_i tail) + sum_k c_ij^k x_k tail
        for w, c in self._lmul(i, tail).items():
            for w2, c2 in self._lmul(j, w).items():
                _acc(out, w2, c * c2)
        for k, ck in self._table.get((i, j), {}).items():
            for w, c in self._lmul(k, tail).items():
                _acc(out, w, ck * c)
        self._lmul_memo[key] = out
        return out

    def _times_gen(self, terms: dict, i: int) -> dict:
        out: dict = {}
        for w, c in terms.items():
            for w2, c2 in self._rmul(w, i).items():
                _acc(out, w2, c * c2)
        return out

    def _gen_times(self, i: int, terms: dict) -> dict:
        out: dict = {}
        for w, c in terms.items():
            for w2, c2 in self._lmul(i, w).items():
                _acc(out, w2, c * c2)
        return out

    # -- element level
    def normal_form(self, expr: FreeWordExpression, strategy: str = "memo") -> EnvElement:
        if expr.dim != self.dim:
            raise ValueError("dimension mismatch")
        if strategy != "memo":
            return EnvElement._raw(self.dim, _rewrite(self._table, expr.terms, STRATEGIES[strategy]))
        out: dict = {}
        for w, c in expr.terms.items():
            cur = {(): c}
            for x in w:
                cur = self._times_gen(cur, x)
            for w2, c2 in cur.items():
                _acc(out, w2, c2)
        return EnvElement._raw(self.dim, out)

    def product(self, a: EnvElement, b: EnvElement) -> EnvElement:
        a._check(b)
        if a.dim != self.dim:
            raise ValueError("dimension mismatch")
        out: dict = {}
        for v, cv in b.terms.items():
            cur = a.terms
            for x in v:
                cur = self._times_gen(cur, x)
            for w, c in cur.items():
                _acc(out, w, c * cv)
        return EnvElement._raw(self.dim, out)

    def commutator(self, a: EnvElement, b: EnvElement) -> EnvElement:
        return self.product(a, b) - self.product(b, a)

    def module_action(self, i: int, u: EnvElement) -> EnvElement:
        """x_i u - u x_i."""
        if not 0 <= i < self.dim:
            raise IndexError(f"generator index {i} out of range")
        left = self._gen_times(i, u.terms)
        for w, c in self._times_gen(u.terms, i).items():
            _acc(left, w, -c)
        return EnvElement._raw(self.dim, left)

    def _sym_monomial(self, e: tuple) -> dict:
        hit = self._sym_memo.get(e)
        if hit is not None:
            return hit
        k = sum(e)
        if k <= 1:
            out = {tuple(i for i, a in enumerate(e) for _ in range(a)): Fraction(1)}
        else:
            # average over the first letter: (1/k) sum_i e_i x_i sym(e - unit_i)
            out = {}
            for i, a in enumerate(e):
                if not a:
                    continue
                rest = list(e)
                rest[i] -= 1
                for w, c in self._gen_times(i, self._sym_monomial(tuple(rest))).items():
                    _acc(out, w, c * Fraction(a, k))
        self._sym_memo[e] = out
        return out

    def symmetrize(self, f: SymPolynomial) -> EnvElement:
        if f.dim != self.dim:
            raise ValueError("dimension mismatch")
        out: dict = {}
        for e, c in f.terms.items():
            for w, cw in self._sym_monomial(e).items():
                _acc(out, w, c * cw)
        return EnvElement._raw(self.dim, out)

    def inverse(self, u: EnvElement) -> SymPolynomial:
        """The unique f with symmetrize(f) == u, by peeling off top symbols."""
        if u.dim != self.dim:
            raise ValueError("dimension mismatch")
        n = self.dim
        rem = dict(u.terms)
        out: dict = {}
        while rem:
            d = max(len(w) for w in rem)
            symbol = {}
            for w, c in rem.items():
                if len(w) == d:
                    e = [0] * n
                    for x in w:
                        e[x] += 1
                    symbol[tuple(e)] = c
            for e, c in symbol.items():
                out[e] = out.get(e, 0) + c
                for w, cw in self._sym_monomial(e).items():
                    _acc(rem, w, -c * cw)
            assert all(len(w) < d for w in rem), "top symbol did not cancel"
        return SymPolynomial(n, out)


def _leftmost(w: tuple):
    for p in range(len(w) - 1):
        if w[p] > w[p + 1]:
            return p
    return None


def _rightmost(w: tuple):
    for p in range(len(w) - 2, -1, -1):
        if w[p] > w[p + 1]:
            return p
    return None


STRATEGIES: dict[str, Callable] = {"leftmost": _leftmost, "rightmost": _rightmost}


def _rewrite(table: dict, terms: dict, pick: Callable) -> dict:
    """Plain term rewriting; one inversion at a time at the position ``pick`` chooses."""
    done: dict = {}
    work = dict(terms)
    while work:
        w, c = work.popitem()
        p = pick(w)
        if p is None:
            _acc(done, w, c)
            continue
        j, i = w[p], w[p + 1]
        _acc(work, w[:p] + (i, j) + w[p + 2:], c)
        for k, ck in table.get((j, i), {}).items():
            _acc(work, w[:p] + (k,) + w[p + 2:], c * ck)
    return done


@lru_cache(maxsize=None)
def enveloping(alg: LieAlgebra) -> Enveloping:
    """The shared :class:`Enveloping` instance for ``alg``."""
    return Enveloping(alg)


def normal_form(alg: LieAlgebra, expr: FreeWordExpression, strategy: str = "memo") -> EnvElement:
    return enveloping(alg).normal_form(expr, strategy)


def product(alg: LieAlgebra, a: EnvElement, b: EnvElement) -> EnvElement:
    return enveloping(alg).product(a, b)


def commutator(alg: LieAlgebra, a: EnvElement, b: EnvElement) -> EnvElement:
    return enveloping(alg).commutator(a, b)


def module_action(alg: LieAlgebra, i: int, u: EnvElement) -> EnvElement:
    return enveloping(alg).module_action(i, u)


def pbw_symmetrize(alg: LieAlgebra, f: SymPolynomial) -> EnvElement:
    return enveloping(alg).symmetrize(f)


def pbw_inverse(alg: LieAlgebra, u: EnvElement) -> SymPolynomial:
    return enveloping(alg).inverse(u)


def _distinct_orderings(e: tuple):
    letters = [i for i, a in enumerate(e) for _ in range(a)]
    return sorted(set(permutations(letters)))


def symmetrize_by_permutations(alg: LieAlgebra, f: SymPolynomial, strategy: str = "leftmost") -> EnvElement:
    """Direct symmetrization: every distinct ordering with its multinomial weight.

    Slow; kept as an independent cross-check of :func:`pbw_symmetrize`.
    """
    words: dict = {}
    for e, c in f.terms.items():
        k = sum(e)
        weight = Fraction(prod(factorial(a) for a in e), factorial(k))
        for w in _distinct_orderings(e):
            _acc(words, w, c * weight)
    return EnvElement._raw(alg.dim, _rewrite(alg.full_table, words, STRATEGIES[strategy]))


def symbol_monomial(w: tuple, dim: int) -> tuple:
    return tuple(Counter(w).get(i, 0) for i in range(dim))


def check_module_map(alg: LieAlgebra, f: SymPolynomial) -> bool:
    """pbw_symmetrize(x_i . f) == x_i . pbw_symmetrize(f) for every generator."""
    U = enveloping(alg)
    sf = U.symmetrize(f)
    return all(
        U.symmetrize(adjoint_action(alg, i, f)) == U.module_action(i, sf) for i in range(alg.dim)
    )
