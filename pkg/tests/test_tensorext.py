from math import comb

import pytest
from hypothesis import assume, given

from homlie.actions import identity_crossed_module, inclusion_crossed_module
from homlie.algebra import (
    AlgebraError,
    Morphism,
    abelian,
    abelianization,
    direct_sum,
    heisenberg,
    nilpotent_alpha_cover,
    nilpotent_alpha_example,
    sl2,
)
from homlie.exactlin import GF, QQ, Subspace
from homlie.tensorext import (
    TensorError,
    central_extension_lift,
    exterior_product,
    exterior_square,
    gamma,
    induced_map,
    j2,
    psi_gamma_map,
    exterior_sequence_check,
    square,
    tensor_product,
    tensor_square,
    uce_check,
)

from conftest import random_algebras
from oracles import homology_dims


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_abelian_squares(n):
    t = tensor_square(abelian(n))
    assert t.dim == n * n
    assert exterior_product(t).dim == comb(n, 2)
    assert t.kernel_lambda.dim == t.dim


def test_sl2_squares():
    t = tensor_square(sl2())
    e = exterior_product(t)
    assert t.dim == e.dim == 3
    assert e.lam.kernel.dim == 0
    assert square(t).dim == 0


def test_heisenberg_squares():
    # H2(H(1)) = 2 and Gamma of the 2-dim abelianization has dim 3
    t = tensor_square(heisenberg(1))
    e = exterior_product(t)
    assert e.dim == 2 + 1
    assert t.dim == 2 + 3 + 1
    assert t.ok and e.ok


def test_cover_needs_relation_closure():
    """On K4 the defining relations alone leave [f1*f3, f1*f3] = f4*f4 nonzero;
    the generated algebra needs one more relation."""
    t = tensor_square(nilpotent_alpha_cover())
    assert t.closure_dim == 1
    assert t.relation_space.dim == t.literal_relations.dim + 1
    assert t.ok
    for L in (sl2(), heisenberg(1), heisenberg(2), nilpotent_alpha_example()):
        assert tensor_square(L).closure_dim == 0


@given(random_algebras(hi=4))
def test_certificates_on_random_algebras(L):
    t = tensor_square(L)
    e = exterior_product(t)
    assert t.ok, {k: v for k, v in t.certificates.items() if not v}
    assert e.ok, {k: v for k, v in e.certificates.items() if not v}
    assert e.lam.image == L.derived
    assert t.lam.image == L.derived


@given(random_algebras(hi=5))
def test_exterior_kernel_matches_oracle_homology(L):
    e = exterior_square(L)
    assert e.lam.kernel.dim == homology_dims(L, 2)[2]


@given(random_algebras(modes=("identity", "surjective"), hi=4))
def test_gamma_identity_against_oracle(L):
    assume(L.alpha_surjective)
    g = gamma(abelianization(L)[0]).dim
    assert j2(L) == homology_dims(L, 2)[2] + g


def test_prime_field_products():
    F = GF(5)
    t = tensor_square(heisenberg(1, field=F))
    assert t.dim == 6 and t.ok


def test_characteristic_two():
    # the tensor square needs no division; the square m * m does
    assert tensor_square(abelian(2, field=GF(2))).dim == 4
    with pytest.raises(TensorError):
        exterior_square(abelian(2, field=GF(2)))
    with pytest.raises(TensorError):
        gamma(2, field=GF(2))


def test_partial_tensor_product_with_ideal():
    L = heisenberg(1)
    t = tensor_product(inclusion_crossed_module(L, L.center), identity_crossed_module(L))
    # Z * L is Z (x) L^ab for a central ideal Z
    assert t.ok
    assert t.dim == 1 * 2
    e = exterior_product(t)
    assert e.ok


# --- Gamma and psi


def test_gamma_examples():
    assert gamma(0).dim == 0
    G = gamma(2)
    assert G.dim == 3
    assert QQ.equal(G.alpha_gamma, QQ.eye(3))
    assert G.labels == ["g(0)", "g(1)", "g(0,1)"]


@given(random_algebras(hi=4))
def test_gamma_dimension(L):
    assert gamma(L).dim == L.dim * (L.dim + 1) // 2


def test_gamma_is_quadratic():
    G = gamma(2)
    v = QQ.array([2, 3])
    assert QQ.equal(G.gamma_of(QQ.mul(v, QQ.scalar(2))), QQ.mul(G.gamma_of(v), QQ.scalar(4)))


@given(random_algebras(modes=("identity", "surjective"), hi=4))
def test_psi_certificates(L):
    assume(L.alpha_surjective)
    psi = psi_gamma_map(L)
    assert psi.ok, psi.certificates


def test_psi_needs_surjective_alpha():
    with pytest.raises(TensorError):
        psi_gamma_map(nilpotent_alpha_example())


# --- maps between products


def test_induced_identity():
    L = heisenberg(1)
    e = exterior_square(L)
    I = QQ.eye(3)
    assert QQ.equal(induced_map(e, e, I, I), QQ.eye(e.dim))


def test_trivial_extension_lift_is_lambda():
    L = heisenberg(1)
    lift = central_extension_lift(Morphism(L, L, QQ.eye(3)))
    assert lift.ok
    assert QQ.equal(lift.psi.matrix, exterior_square(L).lam.matrix)


def test_sl2_central_extension_lift_is_unique():
    K = direct_sum(sl2(), abelian(1))
    phi = Morphism(K, sl2(), QQ.eye(4)[:3])
    lift = central_extension_lift(phi)
    assert lift.ok and lift.unique
    # the image lies in the sl2 block
    assert QQ.is_zero(lift.psi.matrix[3])


def test_lift_rejects_noncentral():
    L = heisenberg(1)
    phi = Morphism(L, abelian(1), QQ.array([[1, 0, 0]]), check=False)
    with pytest.raises(AlgebraError):
        central_extension_lift(phi)


def test_uce_for_perfect_algebras():
    assert uce_check(sl2()).ok
    assert uce_check(direct_sum(sl2(), sl2())).dims["ker_lambda"] == 0
    with pytest.raises(AlgebraError):
        uce_check(heisenberg(1))


# --- the exterior sequence


def test_exterior_sequence_zero_ideal():
    L = heisenberg(1)
    rep = exterior_sequence_check(L, Subspace.zero(QQ, 3))
    assert rep.ok
    assert rep.dims["K^K"] == rep.dims["L^L"]


def test_exterior_sequence_split_sum():
    K = direct_sum(heisenberg(1), abelian(1))
    M = Subspace.span(QQ, QQ.eye(4)[3:])
    rep = exterior_sequence_check(K, M, section=QQ.eye(4)[:, :3])
    assert rep.ok
    assert rep.checks["split_left_injective"]


def test_exterior_sequence_central_nonsplit():
    L = heisenberg(1)
    rep = exterior_sequence_check(L, L.center)
    assert rep.checks["middle_exact"]
    assert rep.ok
