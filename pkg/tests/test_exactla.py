import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgres import exactla as la

P = 101


def test_rref_identity():
    rr, piv = la.rref(np.eye(2, dtype=np.int64), P)
    assert np.array_equal(rr, np.eye(2, dtype=np.int64))
    assert piv == [0, 1]


def test_rref_zero():
    rr, piv = la.rref(la.zeros(3, 3), P)
    assert not np.any(rr)
    assert piv == []


def test_rref_rank_one_gf5():
    rr, piv = la.rref([[1, 2], [2, 4]], 5)
    assert np.array_equal(rr, np.array([[1, 2], [0, 0]]))
    assert piv == [0]


def test_kernel_identity_and_zero():
    assert la.kernel(np.eye(4, dtype=np.int64), P).dim == 0
    full = la.kernel(la.zeros(3, 3), P)
    assert full.dim == 3
    assert np.array_equal(full.basis, np.eye(3, dtype=np.int64))


def test_kernel_gf5_hand_example():
    ker = la.kernel([[1, 2], [2, 4]], 5)
    # solved by hand: spanned by (-2, 1)
    assert ker == la.span([[-2, 1]], 2, 5)


def test_solve_hand_examples():
    assert np.array_equal(la.solve(np.eye(3, dtype=np.int64), [5, 6, 7], P), [5, 6, 7])
    assert la.solve(la.zeros(2, 2), [1, 0], P) is None
    x = la.solve([[1, 1], [0, 1]], [3, 1], 7)
    assert np.array_equal(x, [2, 1])


def test_solve_shape_mismatch():
    with pytest.raises(ValueError):
        la.solve(la.zeros(2, 3), [1, 2, 3], P)


def test_quotient_of_zero_subspace():
    sub = la.span(la.zeros(0, 2), 2, P)
    proj, sect = la.quotient_basis(sub)
    assert np.array_equal(proj, np.eye(2, dtype=np.int64))
    assert np.array_equal(la.matmul(proj, sect, P), np.eye(2, dtype=np.int64))


def test_quotient_of_full_subspace():
    sub = la.span(np.eye(2, dtype=np.int64), 2, P)
    proj, sect = la.quotient_basis(sub)
    assert proj.shape == (0, 2)
    assert sect.shape == (2, 0)


def test_quotient_of_line():
    sub = la.span([[1, 0]], 2, P)
    proj, sect = la.quotient_basis(sub)
    assert proj.shape == (1, 2)
    assert proj[0, 1] == 1
    assert np.array_equal(la.matmul(proj, sect, P), np.eye(1, dtype=np.int64))
    assert la.kernel(proj, P) == sub


small_mats = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(0, P - 1), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_rank_nullity(rows):
    m = np.array(rows, dtype=np.int64)
    assert la.rank(m, P) + la.kernel(m, P).dim == m.shape[1]


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_rref_idempotent(rows):
    m = np.array(rows, dtype=np.int64)
    rr, piv = la.rref(m, P)
    rr2, piv2 = la.rref(rr, P)
    assert np.array_equal(rr, rr2)
    assert piv == piv2


@settings(max_examples=60, deadline=None)
@given(small_mats, st.lists(st.integers(0, P - 1), min_size=1, max_size=5))
def test_solve_exactness(rows, xs):
    m = np.array(rows, dtype=np.int64)
    x = np.array(xs[: m.shape[1]] + [0] * max(0, m.shape[1] - len(xs)), dtype=np.int64)
    b = la.matmul(m, x, P)
    sol = la.solve(m, b, P)
    assert sol is not None
    assert np.array_equal(la.matmul(m, sol, P), b)


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_quotient_rank_and_kernel(rows):
    m = np.array(rows, dtype=np.int64)
    sub = la.span(m, m.shape[1], P)
    proj, sect = la.quotient_basis(sub)
    assert la.rank(proj, P) == sub.ambient_dim - sub.dim
    assert la.kernel(proj, P) == sub
    q = proj.shape[0]
    assert np.array_equal(la.matmul(proj, sect, P), np.eye(q, dtype=np.int64))


def test_kernel_basis_is_canonical():
    # two generating sets of the same kernel give identical Subspace values
    m = np.array([[1, 2, 3], [2, 4, 6]], dtype=np.int64)
    k1 = la.kernel(m, 7)
    k2 = la.span([v for v in k1.basis[::-1]], 3, 7)
    assert k1 == k2


def test_intersection():
    a = la.span([[1, 0, 0], [0, 1, 0]], 3, P)
    b = la.span([[0, 1, 0], [0, 0, 1]], 3, P)
    assert la.intersection(a, b) == la.span([[0, 1, 0]], 3, P)
