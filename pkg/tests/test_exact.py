from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpclie import exact


def small_int_matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_qarray_accepts_strings_and_transposed_views():
    a = exact.qarray([[1, "1/2"], ["-3/4", 2]])
    assert a[0, 1] == Fraction(1, 2)
    t = exact.qarray(np.arange(6).reshape(2, 3).T)
    assert all(isinstance(x, Fraction) for x in t.reshape(-1))
    assert t[2, 1] == 5


def test_qarray_rejects_floats():
    with pytest.raises(TypeError):
        exact.qarray([[0.5]])


def test_rref_known():
    r, piv = exact.rref([[1, 2, 3], [2, 4, 7]])
    assert piv == [0, 2]
    assert r[0, 1] == 2 and r[1, 2] == 1


def test_solve_inconsistent_and_singular():
    with pytest.raises(exact.ExactArithmeticError):
        exact.solve([[1, 1], [1, 1]], [1, 2])
    with pytest.raises(exact.ExactArithmeticError):
        exact.inverse([[1, 2], [2, 4]])


def test_orthogonal_complement_in_subspace():
    form = exact.qeye(3)
    comp = exact.orthogonal_complement(exact.qarray([[1, 1, 0]]), form, exact.qarray([[1, 0, 0], [0, 1, 0]]))
    assert comp.shape == (1, 3)
    assert comp[0] @ exact.qarray([1, 1, 0]) == 0


def test_rationalize():
    assert exact.rationalize(0.5) == Fraction(1, 2)
    with pytest.raises(exact.ExactArithmeticError):
        exact.rationalize(2 ** 0.5, max_den=10)


@settings(max_examples=60, deadline=None)
@given(small_int_matrices())
def test_rank_matches_rref_and_numpy(m):
    q = exact.qarray(m)
    _, piv = exact.rref(q)
    assert exact.rank(q) == len(piv) == np.linalg.matrix_rank(np.array(m, float))


@settings(max_examples=60, deadline=None)
@given(small_int_matrices())
def test_nullspace_is_annihilated_and_complementary(m):
    q = exact.qarray(m)
    ns = exact.nullspace(q)
    assert ns.shape[0] + exact.rank(q) == q.shape[1]
    if ns.shape[0]:
        assert exact.is_zero(q @ ns.T)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_roundtrip(m):
    q = exact.qarray(m)
    if exact.rank(q) < q.shape[0]:
        return
    assert exact.is_zero(q @ exact.inverse(q) - exact.qeye(q.shape[0]))


@settings(max_examples=40, deadline=None)
@given(small_int_matrices(4, 4), st.integers(1, 7))
def test_qmatmul_agrees_with_fraction_product(m, d):
    a = exact.qarray(m) / d
    b = a.T * Fraction(3, 5)
    assert exact.is_zero(exact.qmatmul(a, b) - a @ b)


@settings(max_examples=40, deadline=None)
@given(small_int_matrices(4, 4))
def test_row_basis_spans_same_space(m):
    q = exact.qarray(m)
    b = exact.row_basis(q)
    if b.shape[0]:
        assert exact.same_span(b, q)
    else:
        assert exact.is_zero(q)


@settings(max_examples=30, deadline=None)
@given(small_int_matrices(4, 4))
def test_orthogonalize_gives_orthogonal_rows(m):
    q = exact.qarray(m)
    form = exact.qarray(np.diag([1, 2, 3, 5])[: q.shape[1], : q.shape[1]].tolist())
    o = exact.orthogonalize(q, form)
    g = o @ form @ o.T
    assert o.shape[0] == exact.rank(q)
    assert all(g[i, j] == 0 for i in range(len(g)) for j in range(len(g)) if i != j)
