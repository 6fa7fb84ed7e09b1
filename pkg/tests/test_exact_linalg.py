from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from defcohom import exact_linalg as el
from defcohom.exact_linalg import (
    ContainmentError,
    Echelon,
    RationalMatrix,
    Subquotient,
    image_basis,
    inverse,
    kernel_basis,
    quotient_basis,
    rank,
    rref,
    span_rank,
    to_rational,
)

from .strategies import low_rank_matrices, matrices, small_rationals

M = RationalMatrix.from_rows


# --- rationals ---------------------------------------------------------------

def test_rational_parsing_lowest_terms():
    x = to_rational("-6/4")
    assert x == Fraction(-3, 2) and x.denominator == 2
    assert to_rational("7") == 7
    assert el.format_rational(Fraction(-3, 2)) == "-3/2"
    assert el.format_rational(Fraction(5)) == "5"


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "x"])
def test_rational_rejects_inexact_or_malformed(bad):
    with pytest.raises((TypeError, ValueError, ZeroDivisionError)):
        to_rational(bad)


def test_matrix_never_stores_zeros():
    m = RationalMatrix(2, 2, {(0, 0): 0, (1, 1): "1/2"})
    assert m.nnz == 1
    assert (m - m).nnz == 0


def test_matrix_rejects_out_of_bounds():
    with pytest.raises(IndexError):
        RationalMatrix(2, 2, {(2, 0): 1})


# --- rref / rank / kernel oracles -----------------------------------------------

def test_rref_zero_matrix():
    r, piv = rref(RationalMatrix.zeros(2, 3))
    assert r.is_zero() and piv == []


def test_rref_identity():
    r, piv = rref(RationalMatrix.identity(3))
    assert r == RationalMatrix.identity(3) and piv == [0, 1, 2]


def test_rref_rank_one_by_hand():
    r, piv = rref(M([[1, 2], [2, 4]]))
    assert r == M([[1, 2], [0, 0]]) and piv == [0]
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_rank_trivial_cases():
    assert rank(RationalMatrix.zeros(4, 5)) == 0
    assert rank(RationalMatrix.identity(6)) == 6


def test_kernel_examples():
    assert kernel_basis(RationalMatrix.identity(2)) == []
    assert span_rank(kernel_basis(RationalMatrix.zeros(2, 2)), 2) == 2
    (v,) = kernel_basis(M([[1, 2], [2, 4]]))
    assert v[0] == -2 * v[1] and v[1] != 0


def test_quotient_examples():
    e1, e2 = (1, 0), (0, 1)
    assert len(quotient_basis([e1, e2], [])) == 2
    (r,) = quotient_basis([e1, e2], [e1])
    assert r[1] != 0
    (r,) = quotient_basis([(1, 1), (1, -1)], [e1])
    assert span_rank([r, e1], 2) == 2


def test_quotient_containment_violation():
    with pytest.raises(ContainmentError):
        quotient_basis([(1, 0)], [(0, 1)])
    with pytest.raises(ContainmentError):
        Subquotient([], [(1, 0)], 2)


def test_inverse_round_trip_and_singular():
    a = M([[2, 1], [1, 1]])
    assert a @ inverse(a) == RationalMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        inverse(M([[1, 2], [2, 4]]))


def test_block_and_submatrix():
    a, b = M([[1, 2]]), M([[3]])
    blk = RationalMatrix.block([[a, b], [RationalMatrix.zeros(1, 2), b]])
    assert blk == M([[1, 2, 3], [0, 0, 3]])
    assert blk.submatrix([1], [2]) == b


def test_sparse_path_agrees_with_dense():
    # 70 x 70 exceeds the dense cutoff, so rref runs the sparse kernel
    n = 70
    entries = {(i, (3 * i) % n): i + 1 for i in range(n)}
    entries.update({(i, (3 * i + 1) % n): 1 for i in range(0, n, 2)})
    big = RationalMatrix(n, n, entries)
    assert n * n > el.DENSE_CUTOFF
    k = kernel_basis(big)
    assert rank(big) + len(k) == n
    assert all(not any(big @ v) for v in k)
    assert rank(big) == rank(big.T)


# --- properties -----------------------------------------------------------------

@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == m.cols


@given(low_rank_matrices())
def test_kernel_vectors_are_exact_zeros(m):
    for v in kernel_basis(m):
        assert all(x == 0 for x in m @ v)


@given(matrices())
def test_rref_idempotent(m):
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert r2 == r and piv2 == piv
    assert piv == sorted(set(piv))


@given(low_rank_matrices())
def test_rank_of_transpose(m):
    assert rank(m) == rank(m.T)


@given(low_rank_matrices())
def test_rref_preserves_row_space(m):
    r, piv = rref(m)
    assert span_rank(m.to_rows() + r.to_rows(), m.cols) == len(piv)


@given(low_rank_matrices())
def test_image_basis_spans_columns(m):
    basis = image_basis(m)
    assert len(basis) == rank(m)
    assert span_rank(basis + m.columns(), m.rows) == len(basis)


@given(st.lists(st.lists(small_rationals, min_size=4, max_size=4), max_size=5),
       st.lists(st.lists(small_rationals, min_size=4, max_size=4), max_size=3))
def test_echelon_solve(vectors, probes):
    ech = Echelon(4, track=True)
    kept = [v for v in vectors if ech.add(v)]
    kept_ech = Echelon(4, track=True)
    for v in kept:
        kept_ech.add(v)
    for v in kept:
        coeffs = kept_ech.solve(v)
        combo = [sum(c * u[j] for c, u in zip(coeffs, kept)) for j in range(4)]
        assert combo == list(v)
    for p in probes:
        assert (kept_ech.solve(p) is not None) == ech.contains(p)


@given(st.lists(st.lists(small_rationals, min_size=3, max_size=3), max_size=4),
       st.lists(st.lists(small_rationals, min_size=3, max_size=3), max_size=4))
def test_quotient_basis_count(u, extra):
    w = u[: len(u) // 2]
    reps = quotient_basis(u, w)
    assert len(reps) == span_rank(u, 3) - span_rank(w, 3)
    assert span_rank(reps + w, 3) == span_rank(u, 3)


@given(low_rank_matrices())
def test_subquotient_coordinates_round_trip(m):
    z = kernel_basis(m)
    sq = Subquotient(z, z[:1], m.cols)
    for i, r in enumerate(sq.reps):
        coords = sq.coordinates(r)
        assert coords == tuple(Fraction(int(j == i)) for j in range(sq.dim))
