"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries.  Internally rows
are kept sparse (``{column: value}``) because the matrices coming out of the
polynomial code are overwhelmingly zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "RationalMatrix",
    "SubspaceBasis",
    "rref",
    "kernel_basis",
    "membership",
    "rank",
]


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point entries are not allowed")
    return Fraction(x)


class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        rows = tuple(tuple(_q(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError(f"row of length {len(r)} in a matrix with {ncols} columns")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_sparse(cls, rows: Iterable[dict], ncols: int) -> "RationalMatrix":
        out = []
        for r in rows:
            dense = [Fraction(0)] * ncols
            for c, v in r.items():
                dense[c] = v
            out.append(dense)
        return cls(out, ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def sparse_rows(self) -> list[dict]:
        return [{c: v for c, v in enumerate(r) if v} for r in self.rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
            other.ncols,
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"RationalMatrix([{body}], ncols={self.ncols})"


def _axpy(target: dict, scale: Fraction, src: dict) -> None:
    """target += scale * src, dropping cancelled entries."""
    for c, v in src.items():
        nv = target.get(c, 0) + scale * v
        if nv:
            target[c] = nv
        else:
            target.pop(c, None)


class _Echelon:
    """Incrementally maintained reduced row-echelon form.

    Each stored row remembers which combination of the inserted vectors
    produced it, so solutions can be reported over the original spanning set.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}  # pivot column -> row (pivot entry == 1)
        self.combos: dict[int, dict] = {}  # pivot column -> {generator index: coeff}

    def reduce(self, vec: dict, combo: dict | None = None) -> None:
        for p in [c for c in vec if c in self.rows]:
            s = vec.get(p)
            if s:
                _axpy(vec, -s, self.rows[p])
                if combo is not None:
                    _axpy(combo, -s, self.combos[p])

    def insert(self, vec: dict, gen_index: int) -> bool:
        vec = dict(vec)
        combo = {gen_index: Fraction(1)}
        self.reduce(vec, combo)
        if not vec:
            return False
        p = min(vec)
        inv = 1 / vec[p]
        vec = {c: v * inv for c, v in vec.items()}
        combo = {g: v * inv for g, v in combo.items()}
        for q, row in self.rows.items():
            s = row.get(p)
            if s:
                _axpy(row, -s, vec)
                _axpy(self.combos[q], -s, combo)
        self.rows[p] = vec
        self.combos[p] = combo
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace of Q^ambient_dim, stored in RREF next to its spanning set.

    ``generators`` are the vectors the subspace was built from (sparse dicts),
    ``labels`` optional names for them.  Membership witnesses are expressed
    over ``generators``.
    """

    ambient_dim: int
    basis_rows: RationalMatrix
    pivot_cols: tuple[int, ...]
    generators: tuple[dict, ...] = ()
    labels: tuple[str, ...] = ()
    _echelon: _Echelon = field(default=None, repr=False, compare=False)

    @classmethod
    def from_spanning(
        cls, vectors: Iterable, ambient_dim: int, labels: Sequence[str] | None = None
    ) -> "SubspaceBasis":
        gens = []
        for v in vectors:
            if isinstance(v, dict):
                d = {c: _q(x) for c, x in v.items() if x}
            else:
                if len(v) != ambient_dim:
                    raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
                d = {c: _q(x) for c, x in enumerate(v) if x}
            if any(not 0 <= c < ambient_dim for c in d):
                raise ValueError("vector support outside the ambient space")
            gens.append(d)
        ech = _Echelon(ambient_dim)
        for j, g in enumerate(gens):
            ech.insert(g, j)
        piv = tuple(ech.pivots())
        rows = RationalMatrix.from_sparse([ech.rows[p] for p in piv], ambient_dim)
        if labels is None:
            labels = tuple(f"v{j}" for j in range(len(gens)))
        elif len(labels) != len(gens):
            raise ValueError("one label per generator is required")
        return cls(ambient_dim, rows, piv, tuple(gens), tuple(labels), ech)

    @property
    def dim(self) -> int:
        return len(self.pivot_cols)

    def free_cols(self) -> list[int]:
        piv = set(self.pivot_cols)
        return [c for c in range(self.ambient_dim) if c not in piv]

    def reduce(self, v: dict) -> dict:
        """Remainder of ``v`` modulo the subspace; supported on free columns."""
        v = {c: _q(x) for c, x in v.items() if x}
        self._echelon.reduce(v)
        return v

    def contains(self, v) -> bool:
        return membership(v, self) is not None

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        return all(not self.reduce(r) for r in other.basis_rows.sparse_rows())

    def intersection_dim(self, other: "SubspaceBasis") -> int:
        joint = SubspaceBasis.from_spanning(
            list(self.basis_rows.sparse_rows()) + list(other.basis_rows.sparse_rows()),
            self.ambient_dim,
        )
        return self.dim + other.dim - joint.dim


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row-echelon form, zero rows kept at the bottom to preserve shape."""
    ech = _Echelon(m.ncols)
    for j, r in enumerate(m.sparse_rows()):
        ech.insert(r, j)
    piv = ech.pivots()
    rows = [ech.rows[p] for p in piv] + [{}] * (m.nrows - len(piv))
    return RationalMatrix.from_sparse(rows, m.ncols), piv


def rank(m: RationalMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: RationalMatrix) -> SubspaceBasis:
    """Right null space of ``m``.

    The canonical basis has one vector per free column ``f``: a 1 in position
    ``f`` and minus the RREF column entries in the pivot positions.
    """
    return _kernel_from_sparse(m.sparse_rows(), m.ncols)


def _kernel_from_sparse(rows: Iterable[dict], ncols: int) -> SubspaceBasis:
    ech = _Echelon(ncols)
    for j, r in enumerate(rows):
        ech.insert(r, j)
    piv = set(ech.rows)
    vecs = []
    for f in range(ncols):
        if f in piv:
            continue
        v = {f: Fraction(1)}
        for p, row in ech.rows.items():
            x = row.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return SubspaceBasis.from_spanning(vecs, ncols, [f"k{j}" for j in range(len(vecs))])


def membership(v, s: SubspaceBasis) -> list[Fraction] | None:
    """Coefficients ``w`` with ``sum(w[j] * s.generators[j]) == v``, or None.

    ``v`` may be a dense sequence or a sparse dict.
    """
    if isinstance(v, dict):
        vec = {c: _q(x) for c, x in v.items() if x}
        if any(not 0 <= c < s.ambient_dim for c in vec):
            raise ValueError("vector support outside the ambient space")
    else:
        if len(v) != s.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {s.ambient_dim}")
        vec = {c: _q(x) for c, x in enumerate(v) if x}
    ech = s._echelon
    witness: dict = {}
    # in RREF the coefficient of the row with pivot p is just v[p]
    for p, row in ech.rows.items():
        x = vec.get(p)
        if x:
            _axpy(vec, -x, row)
            _axpy(witness, x, ech.combos[p])
    if vec:
        return None
    out = [Fraction(0)] * len(s.generators)
    for j, x in witness.items():
        out[j] = x
    return out
