import pytest
from hypothesis import assume, given

from homlie.algebra import (
    abelian,
    direct_sum,
    heisenberg,
    nilpotent_alpha_cover,
    nilpotent_alpha_example,
    sl2,
    validate,
)
from homlie.capability import (
    capability_witness,
    direct_sum_capability,
    exterior_center,
    is_capable,
    quotient_center_criteria,
    tensor_center,
    verify_witness,
)
from homlie.exactlin import QQ, Subspace

from conftest import random_algebras


@pytest.mark.parametrize("m", [2, 3])
def test_higher_heisenberg_not_capable(m):
    rep = is_capable(heisenberg(m))
    assert not rep.capable
    assert rep.z_wedge.dim == 1
    assert capability_witness(heisenberg(m)) is None


def test_heisenberg_one_capable():
    rep = is_capable(heisenberg(1), witness=True)
    assert rep.capable
    assert rep.witness is not None and rep.witness.ok


def test_sl2_capable_with_trivial_witness():
    rep = is_capable(sl2(), witness=True)
    assert rep.capable
    assert rep.witness.method == "trivial"


def test_example_pair_witness():
    L = nilpotent_alpha_example()
    rep = is_capable(L, witness=True)
    assert rep.capable
    w = rep.witness
    assert w.method == "nonsurjective"
    K = nilpotent_alpha_cover()
    assert QQ.equal(w.K.table, K.table)
    assert QQ.equal(w.K.alpha, K.alpha)
    assert w.ok


def test_abelian_plane_witness():
    w = capability_witness(abelian(2))
    assert w.method == "abelian"
    assert w.K.dim == 3
    assert QQ.equal(w.K.bracket(QQ.eye(3)[0], QQ.eye(3)[1]), QQ.eye(3)[2])


def test_zero_alpha_witness_dimension():
    L = heisenberg(1, QQ.zeros((3, 3)))
    w = capability_witness(L)
    assert w.method == "zero_alpha"
    assert w.K.dim == L.dim + L.alpha_center.dim


def test_one_dimensional_algebras_are_not_capable():
    """K = span{x} + Z_alpha(K) forces K abelian, hence K = Z_alpha(K)."""
    for a in (0, 1, 2):
        L = abelian(1, QQ.array([[a]]))
        assert not is_capable(L).capable
        assert capability_witness(L) is None


@given(random_algebras())
def test_center_chain(L):
    zs, zw = tensor_center(L), exterior_center(L)
    assert zs <= zw <= L.alpha_center <= L.center


@given(random_algebras(modes=("identity", "surjective")))
def test_center_identities_for_surjective_alpha(L):
    assume(L.alpha_surjective)
    rep = is_capable(L)
    assert rep.center_checks["star_in_derived"]
    assert rep.center_checks["star_is_wedge_meet_derived"]


@given(random_algebras(lo=2, hi=5))
def test_witness_exists_iff_capable(L):
    rep = is_capable(L)
    w = capability_witness(L, capable=rep.capable)
    assert (w is not None) == rep.capable
    if w is not None:
        assert validate(w.K).valid
        assert all(verify_witness(w.K, L, w.projection).values())


@given(random_algebras(modes=("zero",), lo=2, hi=5))
def test_zero_alpha_capable_from_dimension_two(L):
    assume(L.dim >= 2)
    assert is_capable(L).capable


def test_verify_witness_rejects_wrong_projection():
    K = nilpotent_alpha_cover()
    L = nilpotent_alpha_example()
    P = QQ.zeros((3, 4))
    P[0, 1] = P[1, 0] = P[2, 2] = QQ.one
    assert not all(verify_witness(K, L, P).values())


# --- central ideals and direct sums


def test_quotient_center_criteria_zero_ideal():
    L = heisenberg(1)
    r = quotient_center_criteria(L, Subspace.zero(QQ, 3))
    assert r["consistent"]
    assert r["in_exterior_center"] and r["h2_injective"] and r["dimension_identity"]


@pytest.mark.parametrize("m, want", [(1, False), (2, True)])
def test_quotient_center_criteria_heisenberg(m, want):
    H = heisenberg(m)
    r = quotient_center_criteria(H, H.center)
    assert r["consistent"]
    assert r["in_exterior_center"] is want


def test_direct_sum_capability_abelian_pair():
    r = direct_sum_capability(abelian(2), abelian(2))
    assert r["equality"]
    assert r["dims"]["sum"] == 0


def test_direct_sum_capability_heisenberg_pair():
    r = direct_sum_capability(heisenberg(2), heisenberg(2))
    assert r["equality"]
    assert not r["capable_sum"]


def test_heisenberg_plus_zero_alpha_line_is_capable():
    r = direct_sum_capability(heisenberg(2), abelian(1, QQ.zeros((1, 1))))
    assert r["capable_sum"]
    assert r["dims"]["sum"] == 0
    assert not r["regular"]


def test_direct_sum_equality_fails_for_heisenberg_plus_line():
    """H(1) + ab(1) with alpha = id: the sum is capable while ab(1) is not,
    so the exterior center of the sum is not the sum of exterior centers."""
    r = direct_sum_capability(heisenberg(1), abelian(1))
    assert r["capable_sum"]
    assert r["capable_parts"] == [True, False]
    assert not r["equality"]
