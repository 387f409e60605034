"""Lie algebras given by rational structure constants."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from .exactlin import RationalMatrix

__all__ = [
    "LieAlgebra",
    "ValidationReport",
    "validate",
    "ad_matrix",
    "catalog",
    "catalog_names",
    "direct_sum",
    "load_algebra",
    "resolve_algebra",
    "AlgebraError",
]

_FRACTION_RE = re.compile(r"^-?\d+(/\d+)?$")


class AlgebraError(ValueError):
    """Bad algebra name, parameter or file."""


def parse_fraction(s) -> Fraction:
    """Parse a ``"p/q"`` string; ints are accepted, floats are not."""
    if isinstance(s, bool) or isinstance(s, float):
        raise AlgebraError(f"coefficient {s!r} is not an exact rational")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _FRACTION_RE.match(s.strip()):
        raise AlgebraError(f"coefficient {s!r} is not a 'p/q' string")
    q = Fraction(s.strip())
    return q


class LieAlgebra:
    """Structure constants ``[x_i, x_j] = sum_k c_ij^k x_k``.

    Only ``i < j`` brackets are stored; the rest follow from antisymmetry.
    Instances are treated as immutable and hash by identity, so per-algebra
    caches can key on them.
    """

    def __init__(self, name: str, basis: list[str], brackets: dict | None = None):
        self.name = name
        self.basis = tuple(basis)
        self.dim = len(self.basis)
        table = {}
        for (i, j), comb in (brackets or {}).items():
            if not (0 <= i < j < self.dim):
                raise AlgebraError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < dim")
            comb = {k: Fraction(v) for k, v in dict(comb).items() if v}
            if any(not 0 <= k < self.dim for k in comb):
                raise AlgebraError(f"bracket ({i}, {j}) has an output index out of range")
            if comb:
                table[(i, j)] = comb
        self._brackets = table

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"

    @property
    def stored_brackets(self) -> dict:
        return dict(self._brackets)

    def bracket(self, i: int, j: int) -> dict:
        """``[x_i, x_j]`` as ``{k: c_ij^k}``."""
        if i == j:
            return {}
        if i < j:
            return self._brackets.get((i, j), {})
        return {k: -v for k, v in self._brackets.get((j, i), {}).items()}

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self.bracket(i, j).get(k, Fraction(0))

    @cached_property
    def full_table(self) -> dict:
        """All nonzero ``(i, j) -> {k: c}`` including ``i > j``."""
        out = {}
        for (i, j), comb in self._brackets.items():
            out[(i, j)] = comb
            out[(j, i)] = {k: -v for k, v in comb.items()}
        return out

    def same_brackets(self, other: "LieAlgebra") -> bool:
        return self.dim == other.dim and self._brackets == other._brackets

    def is_abelian(self) -> bool:
        return not self._brackets

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "basis": list(self.basis),
            "brackets": [
                [i, j, [[k, str(v)] for k, v in sorted(comb.items())]]
                for (i, j), comb in sorted(self._brackets.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebra":
        try:
            dim = data["dim"]
            basis = data["basis"]
            raw = data["brackets"]
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"algebra file is missing a field: {exc}") from None
        if not isinstance(dim, int) or len(basis) != dim:
            raise AlgebraError("'dim' must equal the number of basis names")
        brackets = {}
        for entry in raw:
            try:
                i, j, comb = entry
            except (TypeError, ValueError):
                raise AlgebraError(f"malformed bracket entry {entry!r}") from None
            if not (isinstance(i, int) and isinstance(j, int)) or not i < j:
                raise AlgebraError(f"bracket entry ({i}, {j}) violates the i < j convention")
            if (i, j) in brackets:
                raise AlgebraError(f"duplicate bracket entry ({i}, {j})")
            out = {}
            for k, v in comb:
                if not isinstance(k, int):
                    raise AlgebraError(f"output index {k!r} is not an integer")
                out[k] = out.get(k, 0) + parse_fraction(v)
            brackets[(i, j)] = out
        return cls(data.get("name", "custom"), list(basis), brackets)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    antisymmetry: bool
    jacobi: bool
    violation: tuple | None = None
    message: str = ""

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "antisymmetry": self.antisymmetry,
            "jacobi": self.jacobi,
            "violation": list(self.violation) if self.violation else None,
            "message": self.message,
        }


def validate(alg: LieAlgebra) -> ValidationReport:
    """Check antisymmetry and the Jacobi identity on all basis triples."""
    n = alg.dim
    for i in range(n):
        for j in range(n):
            a, b = alg.bracket(i, j), alg.bracket(j, i)
            for k in set(a) | set(b):
                if a.get(k, 0) != -b.get(k, 0):
                    return ValidationReport(
                        False, False, False, (i, j, k), f"c[{i},{j}]^{k} != -c[{j},{i}]^{k}"
                    )
    # sum_k c_ij^k c_kl^m + c_jl^k c_ki^m + c_li^k c_kj^m == 0
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                acc: dict = {}
                for (p, q, r) in ((i, j, l), (j, l, i), (l, i, j)):
                    for k, ck in alg.bracket(p, q).items():
                        for m, cm in alg.bracket(k, r).items():
                            acc[m] = acc.get(m, 0) + ck * cm
                for m, v in sorted(acc.items()):
                    if v:
                        names = alg.basis
                        return ValidationReport(
                            False,
                            True,
                            False,
                            (i, j, l, m),
                            f"Jacobi fails on ({names[i]}, {names[j]}, {names[l]}): "
                            f"coefficient {v} on {names[m]}",
                        )
    return ValidationReport(True, True, True)


def ad_matrix(alg: LieAlgebra, i: int) -> RationalMatrix:
    """Matrix of ``ad x_i``; column ``j`` holds the coordinates of ``[x_i, x_j]``."""
    if not 0 <= i < alg.dim:
        raise IndexError(f"generator index {i} out of range for dim {alg.dim}")
    n = alg.dim
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for k, v in alg.bracket(i, j).items():
            rows[k][j] = v
    return RationalMatrix(rows, n)


# ---------------------------------------------------------------- catalog


def abelian(n: int) -> LieAlgebra:
    if n < 1:
        raise AlgebraError("abelian(n) needs n >= 1")
    return LieAlgebra(f"abelian({n})", [f"x{i + 1}" for i in range(n)])


def heisenberg3() -> LieAlgebra:
    return LieAlgebra("heisenberg3", ["x", "y", "z"], {(0, 1): {2: 1}})


def aff1() -> LieAlgebra:
    return LieAlgebra("aff1", ["x", "y"], {(0, 1): {1: 1}})


def sl2() -> LieAlgebra:
    # order e < h < f;  [h,e] = 2e, [h,f] = -2f, [e,f] = h
    return LieAlgebra("sl2", ["e", "h", "f"], {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}})


def gl(n: int) -> LieAlgebra:
    if not 1 <= n <= 3:
        raise AlgebraError("gl(n) is catalogued for 1 <= n <= 3")
    units = [(a, b) for a in range(n) for b in range(n)]
    index = {u: k for k, u in enumerate(units)}
    brackets = {}
    # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
    for i, (a, b) in enumerate(units):
        for j, (c, d) in enumerate(units):
            if i >= j:
                continue
            comb: dict = {}
            if b == c:
                comb[index[(a, d)]] = comb.get(index[(a, d)], 0) + 1
            if d == a:
                comb[index[(c, b)]] = comb.get(index[(c, b)], 0) - 1
            comb = {k: v for k, v in comb.items() if v}
            if comb:
                brackets[(i, j)] = comb
    return LieAlgebra(f"gl({n})", [f"E{a + 1}{b + 1}" for a, b in units], brackets)


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    """Block-diagonal bracket; clashing basis names from ``b`` get a prime."""
    taken = set(a.basis)
    names = list(a.basis)
    for nm in b.basis:
        while nm in taken:
            nm += "'"
        taken.add(nm)
        names.append(nm)
    off = a.dim
    brackets = dict(a.stored_brackets)
    for (i, j), comb in b.stored_brackets.items():
        brackets[(i + off, j + off)] = {k + off: v for k, v in comb.items()}
    return LieAlgebra(f"{a.name}+{b.name}", names, brackets)


_NAME_RE = re.compile(r"^\s*([a-z_0-9]+?)\s*(?:\(\s*(.*?)\s*\))?\s*$", re.IGNORECASE)


def catalog(name: str, params: tuple = ()) -> LieAlgebra:
    """Build a catalogued algebra by name.

    Accepts ``abelian(n)``, ``heisenberg3``, ``aff1``, ``sl2``, ``gl(n)``
    (n <= 3) and ``direct_sum(a, b)``.  Compact spellings like ``abelian3``,
    ``gl2`` and ``sl2+abelian1`` also work.
    """
    name = name.strip()
    if params:
        return _build(name.lower(), list(params))
    if "+" in name and not name.lower().startswith("direct_sum"):
        parts = _split_top(name, "+")
        out = catalog(parts[0])
        for p in parts[1:]:
            out = direct_sum(out, catalog(p))
        return out
    m = _NAME_RE.match(name)
    if not m:
        raise AlgebraError(f"unknown algebra {name!r}")
    base, arg = m.group(1).lower(), m.group(2)
    if base == "direct_sum":
        if arg is None:
            raise AlgebraError("direct_sum needs two arguments")
        parts = _split_top(arg, ",")
        if len(parts) != 2:
            raise AlgebraError("direct_sum takes exactly two arguments")
        return direct_sum(catalog(parts[0]), catalog(parts[1]))
    if arg is None:
        tail = re.match(r"^(abelian|gl)(\d+)$", base)
        if tail:
            base, arg = tail.group(1), tail.group(2)
    return _build(base, [] if arg in (None, "") else [arg])


def _split_top(s: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    if any(not p for p in out):
        raise AlgebraError(f"cannot parse algebra expression {s!r}")
    return out


def _int_param(params, name) -> int:
    if len(params) != 1:
        raise AlgebraError(f"{name} takes one integer parameter")
    try:
        return int(params[0])
    except (TypeError, ValueError):
        raise AlgebraError(f"invalid parameter {params[0]!r} for {name}") from None


def _build(base: str, params: list) -> LieAlgebra:
    if base == "abelian":
        alg = abelian(_int_param(params, "abelian"))
    elif base == "gl":
        alg = gl(_int_param(params, "gl"))
    elif base in ("heisenberg3", "heisenberg"):
        alg = heisenberg3()
    elif base in ("aff1", "aff"):
        alg = aff1()
    elif base == "sl2":
        alg = sl2()
    elif base == "direct_sum":
        a, b = params
        alg = direct_sum(a if isinstance(a, LieAlgebra) else catalog(a),
                         b if isinstance(b, LieAlgebra) else catalog(b))
    else:
        raise AlgebraError(f"unknown algebra {base!r}")
    if base in ("heisenberg3", "heisenberg", "aff1", "aff", "sl2") and params:
        raise AlgebraError(f"{base} takes no parameters")
    report = validate(alg)
    if not report.ok:
        raise AlgebraError(f"catalog algebra {alg.name} fails validation: {report.message}")
    return alg


# the algebras the verification suite sweeps over
SUITE_CATALOG = (
    "abelian(1)",
    "abelian(2)",
    "abelian(3)",
    "heisenberg3",
    "aff1",
    "sl2",
    "gl(2)",
    "sl2+abelian(1)",
)


def catalog_names() -> list[str]:
    return list(SUITE_CATALOG) + ["gl(1)", "gl(3)"]


_CACHE: dict = {}


def resolve_algebra(spec: str) -> LieAlgebra:
    """A catalog name or a path to a JSON algebra file.

    Catalog algebras are cached so repeated lookups share per-algebra caches.
    """
    p = Path(spec)
    if spec.endswith(".json") or p.is_file():
        return load_algebra(p)
    if spec not in _CACHE:
        _CACHE[spec] = catalog(spec)
    return _CACHE[spec]


def load_algebra(path) -> LieAlgebra:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise AlgebraError(f"no such algebra file: {path}") from None
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{path}: invalid JSON ({exc})") from None
    return LieAlgebra.from_json(data)
