from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homlie.exactlin import (
    GF,
    QQ,
    Subspace,
    column_space,
    greatest_backward_invariant,
    intersect,
    inverse,
    nullspace,
    preimage,
    rank,
    rref,
    rref_mod_p,
    solve,
)
from homlie.exactlin import _kernels
from homlie.exactlin.fields import _rref_direct, _rref_modular, _integer_rows

from oracles import backward_invariant, frac_matrix, sympy_rank, sympy_rref


def small_matrices(max_rows=6, max_cols=6, lo=-5, hi=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def as_fractions(red, k):
    return [[Fraction(str(QQ.to_json(x))) for x in row] for row in red[:k]]


# --- rref and rank


def test_rref_identity():
    red, r = rref([[1, 0], [0, 1]])
    assert r == 2
    assert QQ.equal(red, QQ.eye(2))


def test_rref_proportional_rows():
    red, r = rref([[1, 2], [2, 4]])
    assert r == 1
    assert QQ.equal(red, QQ.array([[1, 2], [0, 0]]))


def test_rank_over_f2():
    assert rank([[1, 1], [1, 2]], GF(2)) == 2
    assert rank([[1, 1], [1, 3]], GF(2)) == 1


@given(small_matrices())
def test_rref_matches_sympy(rows):
    red, k = rref(rows)
    want, piv = sympy_rref(rows)
    assert k == len(piv)
    assert as_fractions(red, k) == want


@given(small_matrices(max_rows=12, max_cols=10, lo=-40, hi=40))
def test_modular_rref_matches_direct(rows):
    a = _integer_rows(QQ.array(rows))
    if a.shape[0] == 0:
        return
    red_m, piv_m = _rref_modular(a, a.shape[1])
    red_d, piv_d = _rref_direct(a)
    assert piv_m == piv_d
    assert np.array_equal(red_m, red_d)


def test_modular_rref_large_entries():
    rng = np.random.default_rng(3)
    a = rng.integers(-10**12, 10**12, size=(9, 11)).astype(object)
    a[8] = a[0] * 3 - a[1] * 7
    red, k = rref(a)
    assert k == 8
    assert as_fractions(red, k) == sympy_rref(a.tolist())[0]


@pytest.mark.parametrize("p", [2, 3, 7, 101, 2**31 - 1])
@given(rows=small_matrices(max_rows=8, max_cols=8, lo=0, hi=200))
def test_mod_p_backends_agree(p, rows):
    a = np.array(rows, dtype=np.int64) % p
    outs = [rref_mod_p(a, p, backend=b) for b in ("python", "numpy", "numba")]
    for red, piv in outs[1:]:
        assert np.array_equal(red, outs[0][0])
        assert np.array_equal(piv, outs[0][1])
    assert len(outs[0][1]) == sympy_rank(rows, p)


def test_mod_p_rejects_large_modulus():
    with pytest.raises(ValueError):
        rref_mod_p(np.zeros((1, 1), dtype=np.int64), 2**31 + 11)


def test_jit_flag_switches_backend():
    before = _kernels.jit_enabled()
    try:
        _kernels.set_jit(False)
        assert not _kernels.jit_enabled()
        assert rank([[1, 2], [3, 4]], GF(5)) == 2
    finally:
        _kernels.set_jit(before)


# --- fields


def test_rational_parsing():
    v = QQ.array(["1/2", "-3", 4, "6/4"])
    assert [QQ.to_json(x) for x in v] == ["1/2", "-3/1", "4/1", "3/2"]
    with pytest.raises(ValueError):
        QQ.array(["1.5"])
    with pytest.raises((TypeError, ValueError)):
        QQ.array([np.float64(0.5)])


def test_prime_field_arithmetic():
    F = GF(7)
    assert F.to_json(F.inv(F.scalar(3))) == 5
    assert F.to_json(F.scalar(-1)) == 6
    with pytest.raises(ValueError):
        GF(9)


# --- subspaces


def test_nullspace_examples():
    assert nullspace(QQ.zeros((3, 3))).dim == 3
    assert nullspace(QQ.eye(4)).dim == 0
    S = nullspace([[1, 2, 3]])
    assert S.dim == 2
    for v in S.basis:
        assert QQ.is_zero(QQ.matmul(QQ.array([[1, 2, 3]]), v))


@given(small_matrices())
def test_rank_nullity(rows):
    m = QQ.array(rows)
    assert rank(m) + nullspace(m).dim == m.shape[1]


def test_intersection_examples():
    E = QQ.eye(3)
    a = Subspace.span(QQ, E[[0, 1]])
    b = Subspace.span(QQ, E[[1, 2]])
    assert intersect(a, b) == Subspace.span(QQ, E[[1]])
    assert intersect(a, a) == a


@given(small_matrices(4, 4), small_matrices(4, 4))
def test_intersection_dimension_formula(r1, r2):
    n = 4
    a = Subspace.span(QQ, [r + [0] * (n - len(r)) for r in r1], n)
    b = Subspace.span(QQ, [r + [0] * (n - len(r)) for r in r2], n)
    c = intersect(a, b)
    assert c <= a and c <= b
    assert c.dim + (a + b).dim == a.dim + b.dim


def test_preimage_examples():
    t = Subspace.span(QQ, QQ.array([[1, 1]]))
    assert preimage(QQ.eye(2), t) == t
    assert preimage(QQ.eye(2), Subspace.full(QQ, 2)).is_full()
    proj = QQ.array([[1, 0]])
    assert preimage(proj, Subspace.zero(QQ, 1)) == Subspace.span(QQ, QQ.array([[0, 1]]))


def test_backward_invariant_trivial_cases():
    t = Subspace.span(QQ, QQ.array([[1, 2, 0]]))
    assert greatest_backward_invariant(t, QQ.eye(3)) == t
    assert greatest_backward_invariant(t, QQ.zeros((3, 3))) == t


@given(small_matrices(3, 4, -2, 2), st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=4, max_size=4))
def test_backward_invariant_matches_preimage_intersection(trows, a):
    n = 4
    t = Subspace.span(QQ, [r + [0] * (n - len(r)) for r in trows], n)
    A = QQ.array(a)
    W = greatest_backward_invariant(t, A)
    assert W <= t
    assert W.image(A) <= W
    want = backward_invariant(QQ, t.basis, A, n)
    assert [list(r) for r in frac_matrix(QQ, W.basis)] == want


def test_solve_and_inverse():
    A = QQ.array([[2, 1], [1, 1]])
    x = solve(A, QQ.array([3, 2]))
    assert QQ.equal(x, QQ.array([1, 1]))
    assert QQ.equal(QQ.matmul(A, inverse(A)), QQ.eye(2))
    with pytest.raises(ValueError):
        solve(QQ.array([[1, 1], [1, 1]]), QQ.array([1, 2]))
    with pytest.raises(ValueError):
        inverse(QQ.array([[1, 1], [1, 1]]))


def test_quotient_and_lift_are_inverse():
    S = column_space(QQ.array([[1, 0], [1, 1], [0, 1]]))
    q = S.quotient_matrix()
    lift = S.lift_matrix()
    assert QQ.equal(QQ.matmul(q, lift), QQ.eye(q.shape[0]))
    for v in S.basis:
        assert QQ.is_zero(QQ.matmul(q, v))
