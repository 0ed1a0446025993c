import numpy as np
import pytest
from hypothesis import given, strategies as st

from homlie.algebra import (
    AlgebraError,
    HomLieAlgebra,
    Ideal,
    Morphism,
    abelian,
    abelian_cover,
    abelianization,
    axiom_defects,
    commutator,
    direct_sum,
    heisenberg,
    nilpotent_alpha_cover,
    nilpotent_alpha_example,
    quotient,
    sl2,
    subalgebra,
    validate,
    yau_twist,
)
from homlie.exactlin import GF, QQ, Subspace

from conftest import random_algebras


def span(F, rows, n):
    return Subspace.span(F, F.array(rows), n)


# --- validation


@given(st.integers(0, 5), st.lists(st.integers(-3, 3), min_size=25, max_size=25))
def test_abelian_valid_for_every_alpha(n, entries):
    a = np.array(entries[: n * n]).reshape(n, n)
    assert validate(abelian(n, QQ.array(a) if n else None)).valid


def test_nilpotent_alpha_example_is_valid():
    L = nilpotent_alpha_example()
    assert L.dim == 3
    assert validate(L).valid


def test_alpha_variant_breaks_multiplicativity():
    L = nilpotent_alpha_example()
    a = L.alpha.copy()
    a[2, 2] = QQ.one
    rep = validate(HomLieAlgebra(QQ, L.table, a))
    assert rep.multiplicativity == [(0, 1)]
    assert not rep.skew and not rep.jacobi
    assert not rep.valid


def test_skew_and_jacobi_violations_are_reported():
    t = QQ.zeros((3, 3, 3))
    t[0, 1, 2] = QQ.one  # [e0, e1] = e2 without the antisymmetric entry
    rep = validate(HomLieAlgebra(QQ, t, QQ.eye(3)))
    assert (0, 1) in rep.skew
    # [e0, e1] = e2, [e0, e2] = e0: the Jacobi sum on (e0, e1, e2) is e2
    b = {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]}
    rep = validate(HomLieAlgebra.from_brackets(QQ, 3, b))
    assert rep.jacobi == [(0, 1, 2)]


@given(random_algebras())
def test_axiom_defects_vanish_on_valid_algebras(L):
    assert validate(L).valid
    d = axiom_defects(L)
    assert d.size == 0 or L.field.is_zero(d)


# --- derived algebra, centers


def test_derived_examples():
    assert abelian(3).derived.dim == 0
    L = nilpotent_alpha_example()
    assert L.derived == span(QQ, [[0, 0, 1]], 3)
    H = heisenberg(2)
    assert H.derived == H.center
    assert H.derived.dim == 1


def test_centers_of_abelian():
    L = abelian(3, QQ.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
    assert L.center.is_full()
    assert L.alpha_center.is_full()


def test_alpha_center_of_example_pair():
    L = nilpotent_alpha_example()
    K = nilpotent_alpha_cover()
    assert L.alpha_center == span(QQ, [[0, 0, 1]], 3)
    assert K.alpha_center == span(QQ, [[0, 0, 0, 1]], 4)
    assert L.alpha_center == L.derived


def test_cover_quotient_matches_example():
    L = nilpotent_alpha_example()
    K = nilpotent_alpha_cover()
    Q, q = quotient(K, K.alpha_center)
    assert Q.dim == 3
    assert QQ.equal(Q.table, L.table)
    assert QQ.equal(Q.alpha, L.alpha)
    assert q.defect() is None


def test_quotient_examples():
    L = heisenberg(1)
    Q, _ = quotient(L, L.center)
    assert Q.dim == 2 and Q.is_abelian
    same, _ = quotient(L, Subspace.zero(QQ, 3))
    assert same is L
    with pytest.raises(AlgebraError):
        quotient(L, span(QQ, [[1, 0, 0]], 3))


@given(random_algebras())
def test_alpha_center_is_central_invariant_ideal(L):
    Z = L.alpha_center
    assert Z <= L.center
    assert Z.image(L.alpha) <= Z
    Q, q = quotient(L, Z)
    assert validate(Q).valid
    assert q.defect() is None


# --- direct sums and named algebras


def test_direct_sum_examples():
    L = sl2()
    S = direct_sum(L, abelian(0))
    assert S.dim == 3 and QQ.equal(S.table, L.table)
    A = direct_sum(abelian(1), abelian(1))
    assert A.dim == 2 and A.is_abelian
    H = direct_sum(heisenberg(1), abelian(1))
    assert H.dim == 4 and H.derived.dim == 1


def test_heisenberg_shape():
    H = heisenberg(1)
    assert H.dim == 3
    assert QQ.equal(H.bracket(QQ.array([1, 0, 0]), QQ.array([0, 1, 0])), QQ.array([0, 0, 1]))
    assert H.alpha_is_identity
    assert H.center == span(QQ, [[0, 0, 1]], 3)
    with pytest.raises(AlgebraError):
        heisenberg(0)


def test_abelian_cover_of_plane():
    K = abelian_cover(abelian(2))
    assert K.dim == 3
    assert QQ.equal(K.bracket(QQ.array([1, 0, 0]), QQ.array([0, 1, 0])), QQ.array([0, 0, 1]))
    assert K.alpha_center == span(QQ, [[0, 0, 1]], 3)


def test_sl2_is_perfect_and_centerless():
    L = sl2()
    assert L.is_perfect
    assert L.center.dim == 0
    with pytest.raises(AlgebraError):
        sl2(GF(2))


def test_sl2_over_prime_field():
    L = sl2(GF(5))
    assert validate(L).valid
    assert L.is_perfect


# --- morphisms, ideals, twists


def test_morphism_defects():
    L = heisenberg(1)
    assert Morphism(L, L, QQ.eye(3)).defect() is None
    with pytest.raises(AlgebraError):
        Morphism(L, L, QQ.array([[1, 0, 0], [0, 1, 0], [0, 0, 0]]))


def test_commutator_ideal():
    L = heisenberg(1)
    full = Subspace.full(QQ, 3)
    assert commutator(full, full, L).space == L.derived
    I = Ideal.span(L, QQ.array([[0, 0, 1]]))
    assert I.dim == 1


def test_subalgebra_of_center():
    L = heisenberg(2)
    S, inc = subalgebra(L, L.center)
    assert S.dim == 1 and S.is_abelian
    assert inc.injective


def test_abelianization_dimension():
    Lab, p = abelianization(heisenberg(2))
    assert Lab.dim == 4 and Lab.is_abelian
    assert p.surjective


@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_yau_twist_of_heisenberg_is_hom_lie(c):
    """Every endomorphism of H(1) has this shape: a block A on x, y, any
    z-components, and z -> det(A) z."""
    a, b, d, e, u, v = c
    phi = QQ.array([[a, b, 0], [d, e, 0], [u, v, a * e - b * d]])
    T = yau_twist(heisenberg(1), phi)
    assert validate(T).valid
    assert QQ.equal(T.alpha, phi)


def test_yau_twist_rejects_non_endomorphism():
    with pytest.raises(AlgebraError):
        yau_twist(heisenberg(1), QQ.array([[1, 0, 0], [0, 1, 0], [0, 0, 2]]))
