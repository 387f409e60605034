from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duflokit.exactlin import RationalMatrix, SubspaceBasis, kernel_basis, membership, rank, rref

from conftest import frac_matrix

fractions = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def matrices(draw, max_rows=5, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # zeros are common in real inputs; bias toward them
    entry = st.one_of(st.just(Fraction(0)), fractions)
    return RationalMatrix([[draw(entry) for _ in range(c)] for _ in range(r)], c)


def test_rref_identity():
    m, piv = rref(RationalMatrix.identity(2))
    assert m == RationalMatrix.identity(2)
    assert piv == [0, 1]


def test_rref_rank_one():
    m, piv = rref(RationalMatrix([[2, 4], [1, 2]]))
    assert m == RationalMatrix([[1, 2], [0, 0]])
    assert piv == [0]


def test_floats_rejected():
    with pytest.raises(TypeError):
        RationalMatrix([[0.5]])


def test_rref_random_row_space(rng):
    a = RationalMatrix(frac_matrix(rng, 5, 7))
    r, piv = rref(a)
    # row spaces agree: each side's rows are members of the other's span
    span_a = SubspaceBasis.from_spanning(a.rows, 7)
    span_r = SubspaceBasis.from_spanning(r.rows, 7)
    assert all(membership(row, span_a) is not None for row in r.rows)
    assert all(membership(row, span_r) is not None for row in a.rows)
    for i, p in enumerate(piv):
        assert r[i, p] == 1
        assert all(r[j, p] == 0 for j in range(r.nrows) if j != i)
    assert piv == sorted(piv)


def test_kernel_zero_and_identity():
    assert kernel_basis(RationalMatrix.zeros(3, 3)).dim == 3
    assert kernel_basis(RationalMatrix.identity(3)).dim == 0


def test_membership_basics():
    s = SubspaceBasis.from_spanning([[1, 0, 0]], 3)
    assert membership([0, 1, 0], s) is None
    assert membership([0, 0, 0], s) == [0]
    assert membership([1, 0, 0], s) == [1]


def test_membership_dimension_mismatch():
    s = SubspaceBasis.from_spanning([[1, 0, 0]], 3)
    with pytest.raises(ValueError):
        membership([1, 0], s)


def test_membership_witness_over_redundant_generators():
    gens = [[1, 1, 0], [0, 1, 1], [1, 2, 1], [2, 2, 0]]
    s = SubspaceBasis.from_spanning(gens, 3)
    assert s.dim == 2
    v = [3, 5, 2]
    w = membership(v, s)
    assert w is not None
    assert [sum(w[j] * gens[j][c] for j in range(4)) for c in range(3)] == v


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert r2 == r and piv2 == piv


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert rank(m) + k.dim == m.ncols
    # kernel vectors really are annihilated
    for v in k.basis_rows.rows:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m.rows)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(fractions, min_size=5, max_size=5))
def test_witness_reconstructs(m, coeffs):
    s = SubspaceBasis.from_spanning(m.rows, m.ncols)
    # a combination of the rows is always a member
    v = [sum(c * row[j] for c, row in zip(coeffs, m.rows)) for j in range(m.ncols)]
    w = membership(v, s)
    assert w is not None
    assert [sum(w[i] * m.rows[i][j] for i in range(m.nrows)) for j in range(m.ncols)] == v


def test_stacked_ad_on_quadratics_sl2(sl2):
    # S^2(sl2) has 6 monomials; stacking the three ad-matrices leaves only the Casimir line
    from duflokit.sympoly import SymPolynomial, adjoint_action, monomials

    mons = monomials(3, 2)
    assert len(mons) == 6
    rows = []
    for i in range(3):
        images = [adjoint_action(sl2, i, SymPolynomial.monomial(m)) for m in mons]
        for out in mons:
            rows.append([img.terms.get(out, Fraction(0)) for img in images])
    ker = kernel_basis(RationalMatrix(rows, 6))
    assert ker.dim == 1
    v = dict(zip(mons, (ker.basis_rows[0, j] for j in range(6))))
    scale = v[(0, 2, 0)]
    assert {m: c / scale for m, c in v.items() if c} == {(0, 2, 0): 1, (1, 0, 1): 4}
