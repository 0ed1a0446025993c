"""Tensor and exterior centers, capability, and explicit covers K with K/Z_alpha(K) = L."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (
    AlgebraError,
    HomLieAlgebra,
    Morphism,
    abelian_cover,
    direct_sum,
    quotient,
    validate,
)
from .exactlin import Subspace, greatest_backward_invariant, inverse, nullspace
from .tensorext import (
    ProductResult,
    exterior_product,
    exterior_square,
    induced_map,
    kernel_of,
    restrict,
    tensor_square,
)


def _annihilated_by_all(p: ProductResult) -> Subspace:
    """{y in L : y * l = 0 in the product for every l}."""
    L = p.M
    F = L.field
    n = L.dim
    k = p.dim
    if k == 0 or n == 0:
        return Subspace.full(F, n)
    Q3 = p.quotient_map.reshape(k, n, n)
    # rows indexed by (l, coordinate), columns by y
    rows = Q3.transpose(2, 0, 1).reshape(n * k, n)
    return nullspace(rows, F)


def _center_from(p: ProductResult) -> Subspace:
    return greatest_backward_invariant(_annihilated_by_all(p), p.M.alpha)


def tensor_center(L: HomLieAlgebra, t: ProductResult | None = None) -> Subspace:
    """Elements x with alpha^k(x) * l = 0 in L * L for all l and k >= 0."""
    return _center_from(t if t is not None else tensor_square(L))


def exterior_center(L: HomLieAlgebra, e: ProductResult | None = None) -> Subspace:
    """Elements x with alpha^k(x) ^ l = 0 in L ^ L for all l and k >= 0."""
    return _center_from(e if e is not None else exterior_square(L))


@dataclass
class CapabilityReport:
    z: int
    z_alpha: int
    z_star: Subspace
    z_wedge: Subspace
    capable: bool
    criteria_consistency: dict = dc_field(default_factory=dict)
    center_checks: dict = dc_field(default_factory=dict)
    witness: "Witness | None" = None

    @property
    def consistent(self) -> bool:
        return all(self.criteria_consistency.values()) and all(self.center_checks.values())

    def to_json(self):
        out = {
            "z": self.z,
            "z_alpha": self.z_alpha,
            "z_star": self.z_star.to_json(),
            "z_star_dim": self.z_star.dim,
            "z_wedge": self.z_wedge.to_json(),
            "z_wedge_dim": self.z_wedge.dim,
            "capable": self.capable,
            "criteria_consistency": dict(sorted(self.criteria_consistency.items())),
            "center_checks": dict(sorted(self.center_checks.items())),
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def is_capable(L: HomLieAlgebra, t: ProductResult | None = None, e: ProductResult | None = None,
               witness: bool = False) -> CapabilityReport:
    """Capability through the exterior center, compared with the shortcut criteria."""
    t = t if t is not None else tensor_square(L)
    e = e if e is not None else exterior_product(t)
    zs = tensor_center(L, t)
    zw = exterior_center(L, e)
    za = L.alpha_center
    capable = zw.dim == 0
    crit = {}
    if L.is_abelian:
        crit["abelian"] = capable
    if L.alpha_is_zero:
        crit["zero_alpha"] = capable
    if not L.is_perfect and not L.alpha_surjective:
        crit["nonperfect_nonsurjective"] = capable
    if L.is_perfect:
        ker_alpha = nullspace(L.alpha, L.field) if L.dim else Subspace.zero(L.field, 0)
        crit["perfect_alpha_center_in_kernel"] = capable == (za <= ker_alpha)
        if L.alpha_surjective:
            crit["perfect_surjective_centerless"] = capable == (L.center.dim == 0)
    checks = {"star_in_wedge": zs <= zw, "wedge_in_alpha_center": zw <= za}
    if L.alpha_surjective:
        checks["star_in_derived"] = zs <= L.derived
        checks["star_is_wedge_meet_derived"] = zs == (zw & L.derived)
    rep = CapabilityReport(L.center.dim, za.dim, zs, zw, capable, crit, checks)
    if witness:
        rep.witness = capability_witness(L, e=e, capable=capable)
    return rep


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class Witness:
    """K together with the projection K -> L whose kernel is Z_alpha(K)."""

    method: str
    K: HomLieAlgebra
    projection: Morphism
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        from .serialize import algebra_to_json

        return {
            "method": self.method,
            "algebra": algebra_to_json(self.K),
            "checks": dict(sorted(self.checks.items())),
        }


def verify_witness(K: HomLieAlgebra, L: HomLieAlgebra, projection) -> dict:
    """Checks that projection: K -> L is onto with kernel Z_alpha(K), and that
    quotient(K, Z_alpha(K)) has the structure constants of L after the
    induced identification."""
    F = K.field
    P = projection.matrix if isinstance(projection, Morphism) else projection
    checks = {"valid": validate(K).valid}
    pi = Morphism(K, L, P, check=False)
    checks["projection_is_morphism"] = pi.defect() is None
    checks["projection_surjective"] = pi.surjective
    Z = K.alpha_center
    checks["kernel_is_alpha_center"] = pi.kernel == Z
    Q, q = quotient(K, Z)
    induced = F.matmul(P, Z.lift_matrix()) if Q.dim else F.zeros((L.dim, 0))
    iso = Morphism(Q, L, induced, check=False)
    checks["quotient_isomorphic"] = Q.dim == L.dim and iso.injective and iso.defect() is None
    checks["quotient_aligned"] = Q.dim == L.dim and F.equal(induced, F.eye(L.dim)) and \
        F.equal(Q.table, L.table) and F.equal(Q.alpha, L.alpha)
    return checks


def _extension_by_cocycle(L: HomLieAlgebra, phi, names) -> HomLieAlgebra:
    """L + T with [u, v] = ([u, v]_L, phi(u, v)), T central and alpha(T) = 0.

    ``phi`` is an array (n, n, dim T) of cocycle values on basis pairs.
    """
    F = L.field
    n = L.dim
    r = phi.shape[2]
    table = F.zeros((n + r, n + r, n + r))
    table[:n, :n, :n] = L.table
    table[:n, :n, n:] = phi
    alpha = F.zeros((n + r, n + r))
    alpha[:n, :n] = L.alpha
    return HomLieAlgebra(F, table, alpha, list(L.basis_names) + names, name=f"cover({L.name})")


def _projection(L: HomLieAlgebra, r: int):
    F = L.field
    P = F.zeros((L.dim, L.dim + r))
    P[:, : L.dim] = F.eye(L.dim)
    return P


def _pair_cocycle(F, pi_rows, xi):
    """phi(a, b) = pi(a) xi(b) - pi(b) xi(a) on basis pairs."""
    outer = F.mul(pi_rows.T[:, None, :], xi[None, :, None])  # [a, b, i] = pi_i(a) xi(b)
    return F.sub(outer, outer.transpose(1, 0, 2))


def _zero_alpha_cover(L: HomLieAlgebra, keep_alpha: bool = False):
    """Adjoin t_i with [e_i, f] = t_i for a basis e_i of Z_alpha(L) and a fixed
    complement vector f; everything else as in L."""
    F = L.field
    Z = L.alpha_center
    comp = Z.complement_indices()
    if Z.dim == 0 or not comp:
        return None
    Q = Z.quotient_matrix()
    # coordinates along the Z basis are v[pivots]; along f it is (Q v) at the first slot
    pi_rows = F.zeros((Z.dim, L.dim))
    for i, p in enumerate(Z.pivots):
        pi_rows[i, p] = F.one
    xi = Q[0]
    phi = _pair_cocycle(F, pi_rows, xi)
    K = _extension_by_cocycle(L, phi, [f"t{i + 1}" for i in range(Z.dim)])
    if keep_alpha:
        return K
    K = HomLieAlgebra(F, K.table, F.zeros((K.dim, K.dim)), K.basis_names, K.name)
    return K


def _nonsurjective_cover(L: HomLieAlgebra):
    """Adjoin t_i with [e_i, x] = t_i where x lies outside Z_alpha + [L, L] + Im alpha."""
    F = L.field
    Z = L.alpha_center
    if Z.dim == 0:
        return None
    S = Z + L.derived + Subspace.span(F, L.alpha.T, L.dim)
    if S.is_full():
        return None
    E = F.eye(L.dim)
    x = next(E[i] for i in range(L.dim) if not S.contains(E[i]))
    ann = S.annihilator()
    # a functional xi vanishing on S with xi(x) = 1
    vals = F.matmul(ann.basis, x)
    j = next(i for i in range(ann.dim) if vals[i] != 0)
    xi = F.mul(ann.basis[j], F.inv(vals[j]))
    # projection onto Z along span{x} + (a complement of Z inside ker xi)
    kerxi = nullspace(xi.reshape(1, -1), F)
    comp_basis = [x]
    current = Z
    for v in kerxi.basis:
        if not current.contains(v):
            comp_basis.append(v)
            current = current + Subspace.span(F, v.reshape(1, -1), L.dim)
    basis = np.concatenate([Z.basis, np.stack(comp_basis)])  # rows
    coords = inverse(basis.T, F)  # coords @ v gives coordinates in the new basis
    pi_rows = coords[: Z.dim]
    phi = _pair_cocycle(F, pi_rows, xi)
    return _extension_by_cocycle(L, phi, [f"t{i + 1}" for i in range(Z.dim)])


def _universal_cover(L: HomLieAlgebra, e: ProductResult | None = None):
    """(L ^ L) + L with [X, Y] = (p X ^ p Y, 0), p(xi, v) = v + lambda(xi)."""
    F = L.field
    e = e if e is not None else exterior_square(L)
    w, n = e.dim, L.dim
    if w == 0:
        return None, None
    P = np.concatenate([e.lam.matrix, F.eye(n)], axis=1)  # n x (w + n)
    Qe3 = e.quotient_map.reshape(w, n, n)
    table = F.zeros((w + n, w + n, w + n))
    table[:, :, :w] = F.einsum("ia,jb,kij->abk", P, P, Qe3)
    alpha = F.zeros((w + n, w + n))
    alpha[:w, :w] = e.algebra.alpha
    alpha[w:, w:] = L.alpha
    names = [f"w:{b}" for b in e.algebra.basis_names] + list(L.basis_names)
    return HomLieAlgebra(F, table, alpha, names, name=f"ucover({L.name})"), P


def capability_witness(L: HomLieAlgebra, e: ProductResult | None = None, capable: bool | None = None):
    """An explicit K with K/Z_alpha(K) = L, or None when L is not capable.

    The direct constructions are tried first; if none applies the
    universal extension by L ^ L is used, which works for every capable L.
    """
    candidates = []
    if L.alpha_center.dim == 0:
        candidates.append(("trivial", lambda: (L, L.field.eye(L.dim))))
    if L.is_abelian:
        candidates.append(("abelian", lambda: _with_projection(L, abelian_cover(L))))
    if L.alpha_is_zero:
        candidates.append(("zero_alpha", lambda: _with_projection(L, _zero_alpha_cover(L))))
    if not L.is_perfect and not L.alpha_surjective:
        candidates.append(("nonsurjective", lambda: _with_projection(L, _nonsurjective_cover(L))))
    if L.is_perfect:
        candidates.append(("perfect", lambda: _with_projection(L, _zero_alpha_cover(L, keep_alpha=True))))
    candidates.append(("universal", lambda: _universal_cover(L, e)))
    for method, build in candidates:
        K, P = build()
        if K is None or K.dim == L.dim and method != "trivial":
            continue
        if not validate(K).valid:
            continue
        checks = verify_witness(K, L, P)
        if all(checks.values()):
            return Witness(method, K, Morphism(K, L, P, check=False), checks)
    if capable:
        raise AlgebraError("capable algebra without a verified witness")
    return None


def _with_projection(L, K):
    if K is None:
        return None, None
    return K, _projection(L, K.dim - L.dim)


# ---------------------------------------------------------------------------
# central quotients and direct sums


def quotient_center_criteria(L: HomLieAlgebra, N) -> dict:
    """For a central alpha-invariant N: N inside Z^wedge, injectivity of
    H_2(L) -> H_2(L/N), and dim H_2(L/N) = dim H_2(L) + dim(N meet [L, L])."""
    from .algebra import as_subspace

    F = L.field
    N = as_subspace(N, L)
    if not N <= L.center:
        raise AlgebraError("N is not central")
    if N.dim and not N.image(L.alpha) <= N:
        raise AlgebraError("N is not alpha-invariant")
    Lq, proj = quotient(L, N)
    e = exterior_square(L)
    eq = exterior_square(Lq)
    f = induced_map(e, eq, proj.matrix, proj.matrix)
    h2, h2q = e.lam.kernel, eq.lam.kernel
    g = restrict(F, f, h2, h2q)
    injective = kernel_of(F, g, h2.dim).dim == 0
    inside = N <= exterior_center(L, e)
    identity = h2q.dim == h2.dim + (N & L.derived).dim
    return {
        "in_exterior_center": inside,
        "h2_injective": injective,
        "dimension_identity": identity,
        "consistent": inside == injective == identity,
        "dims": {"H2(L)": h2.dim, "H2(L/N)": h2q.dim, "N": N.dim, "N_meet_derived": (N & L.derived).dim},
    }


def direct_sum_capability(L1: HomLieAlgebra, L2: HomLieAlgebra) -> dict:
    """Compares Z^wedge(L1 + L2) with Z^wedge(L1) + Z^wedge(L2)."""
    F = L1.field
    S = direct_sum(L1, L2)
    z1, z2, zs = exterior_center(L1), exterior_center(L2), exterior_center(S)
    n1, n2 = L1.dim, L2.dim
    rows = []
    if z1.dim:
        rows.append(np.concatenate([z1.basis, F.zeros((z1.dim, n2))], axis=1))
    if z2.dim:
        rows.append(np.concatenate([F.zeros((z2.dim, n1)), z2.basis], axis=1))
    summed = Subspace.span(F, np.concatenate(rows), n1 + n2) if rows else Subspace.zero(F, n1 + n2)
    regular = L1.alpha_surjective and L2.alpha_surjective
    return {
        "containment": zs <= summed,
        "equality": zs == summed,
        "regular": regular,
        "capable_sum": zs.dim == 0,
        "capable_parts": [z1.dim == 0, z2.dim == 0],
        "dims": {"sum": zs.dim, "parts": [z1.dim, z2.dim]},
    }
