"""Hom-actions, crossed modules, semidirect products and split extensions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from .algebra import (
    AlgebraError,
    HomLieAlgebra,
    Morphism,
    as_subspace,
    ideal_defect,
    quotient,
    subalgebra,
    validate,
)
from .exactlin import Subspace, rank
from .exactlin.linalg import solve


@dataclass
class ActionReport:
    """Violated instances of the three Hom-action axioms, by basis indices."""

    a: list = dc_field(default_factory=list)  # (l, l', m)
    b: list = dc_field(default_factory=list)  # (l, m, m')
    c: list = dc_field(default_factory=list)  # (l, m)

    @property
    def valid(self) -> bool:
        return not (self.a or self.b or self.c)

    def to_json(self):
        return {
            "valid": self.valid,
            "axiom_a_violations": [list(t) for t in self.a],
            "axiom_b_violations": [list(t) for t in self.b],
            "axiom_c_violations": [list(t) for t in self.c],
        }


class HomAction:
    """Action of ``actor`` on ``actee``: ``tensor[a, b]`` holds the coordinates of e_a . f_b."""

    def __init__(self, actor: HomLieAlgebra, actee: HomLieAlgebra, tensor, check: bool = True):
        F = actor.field
        if actee.field != F:
            raise AlgebraError("field mismatch")
        t = tensor if isinstance(tensor, np.ndarray) else F.array(tensor)
        if t.size == 0:
            t = F.zeros((actor.dim, actee.dim, actee.dim))
        if t.shape != (actor.dim, actee.dim, actee.dim):
            raise AlgebraError(f"action tensor has shape {t.shape}")
        t = np.array(t, dtype=F.dtype)
        t.setflags(write=False)
        self.actor = actor
        self.actee = actee
        self.tensor = t
        if check:
            rep = validate_action(self)
            if not rep.valid:
                raise AlgebraError(f"action axioms fail: {rep.to_json()}")

    def act(self, l, m):
        return self.actor.field.einsum("a,b,abk->k", l, m, self.tensor)

    @property
    def is_trivial(self) -> bool:
        return self.actor.field.is_zero(self.tensor)

    def __repr__(self):
        return f"HomAction({self.actor.dim} on {self.actee.dim})"


def validate_action(act: HomAction) -> ActionReport:
    F = act.actor.field
    L, M, T = act.actor, act.actee, act.tensor
    rep = ActionReport()
    if L.dim == 0 or M.dim == 0:
        return rep
    AL, AM, CL, CM = L.alpha, M.alpha, L.table, M.table
    # (a)  [l,l'] . alpha(m) = alpha(l) . (l' . m) - alpha(l') . (l . m)
    t_alpha = F.einsum("cqk,qb->cbk", T, AM)
    lhs = F.einsum("xyc,cbk->xybk", CL, t_alpha)
    t_lifted = F.einsum("px,pqk->xqk", AL, T)  # alpha(l_x) . f_q
    inner = F.einsum("ybq,xqk->xybk", T, t_lifted)
    rhs = F.sub(inner, inner.transpose(1, 0, 2, 3))
    bad = np.any(F.sub(lhs, rhs) != 0, axis=3)
    for x, y in combinations(range(L.dim), 2):
        for b in range(M.dim):
            if bad[x, y, b]:
                rep.a.append((x, y, b))
    # (b)  alpha(l) . [m,m'] = [l.m, alpha(m')] + [alpha(m), l.m']
    lhs = F.einsum("bcq,aqk->abck", CM, t_lifted)
    right = F.einsum("rc,qrk->qck", AM, CM)  # [f_q, alpha f_c]
    term1 = F.einsum("abq,qck->abck", T, right)
    term2 = F.neg(term1.transpose(0, 2, 1, 3))
    bad = np.any(F.sub(lhs, F.add(term1, term2)) != 0, axis=3)
    for a in range(L.dim):
        for b, c in combinations(range(M.dim), 2):
            if bad[a, b, c]:
                rep.b.append((a, b, c))
    # (c)  alpha(l . m) = alpha(l) . alpha(m)
    lhs = F.einsum("abq,kq->abk", T, AM)
    rhs = F.einsum("qb,aqk->abk", AM, t_lifted)
    bad = np.any(F.sub(lhs, rhs) != 0, axis=2)
    for a in range(L.dim):
        for b in range(M.dim):
            if bad[a, b]:
                rep.c.append((a, b))
    return rep


def adjoint_action(L: HomLieAlgebra) -> HomAction:
    """l . m = [l, m]."""
    return HomAction(L, L, L.table, check=False)


def action_from_ideal(L: HomLieAlgebra, N) -> HomAction:
    """The bracket action of L on an alpha-invariant ideal N, on N's RREF basis."""
    space = as_subspace(N, L)
    problem = ideal_defect(L, space)
    if problem:
        raise AlgebraError(problem)
    F = L.field
    Nalg, inc = subalgebra(L, space)
    if space.dim == 0:
        return HomAction(L, Nalg, F.zeros((L.dim, 0, 0)), check=False)
    vals = F.einsum("ai,bj,ijk->abk", F.eye(L.dim), space.basis, L.table)
    tensor = vals[:, :, list(space.pivots)]
    act = HomAction(L, Nalg, tensor, check=False)
    rep = validate_action(act)
    if not rep.valid:  # would contradict the axioms of L
        raise AlgebraError(f"induced action fails axioms: {rep.to_json()}")
    return act


# ---------------------------------------------------------------------------
# crossed modules


@dataclass
class CrossedModuleReport:
    equivariance: list = dc_field(default_factory=list)  # (l, m)
    peiffer: list = dc_field(default_factory=list)  # (m, m')
    action: ActionReport = dc_field(default_factory=ActionReport)

    @property
    def valid(self) -> bool:
        return not (self.equivariance or self.peiffer) and self.action.valid


class CrossedModule:
    """A morphism d: M -> L with an action of L on M."""

    def __init__(self, boundary: Morphism, action: HomAction, check: bool = True):
        if action.actor is not boundary.target and action.actor != boundary.target:
            raise AlgebraError("action must be by the target of the boundary map")
        if action.actee is not boundary.source and action.actee != boundary.source:
            raise AlgebraError("action must be on the source of the boundary map")
        self.boundary = boundary
        self.action = action
        if check:
            rep = validate_crossed_module(self)
            if not rep.valid:
                raise AlgebraError("not a crossed module")

    @property
    def M(self) -> HomLieAlgebra:
        return self.boundary.source

    @property
    def L(self) -> HomLieAlgebra:
        return self.boundary.target


def validate_crossed_module(cm: CrossedModule) -> CrossedModuleReport:
    F = cm.L.field
    d = cm.boundary.matrix
    T = cm.action.tensor
    M, L = cm.M, cm.L
    rep = CrossedModuleReport(action=validate_action(cm.action))
    if M.dim == 0:
        return rep
    # d(l . m) = [l, d m]
    lhs = F.einsum("abq,kq->abk", T, d) if L.dim else F.zeros((0, M.dim, 0))
    rhs = F.einsum("qb,aqk->abk", d, L.table) if L.dim else lhs
    bad = np.any(F.sub(lhs, rhs) != 0, axis=2)
    rep.equivariance = [(a, b) for a in range(L.dim) for b in range(M.dim) if bad[a, b]]
    # d(m) . m' = [m, m']
    lhs = F.einsum("qb,qck->bck", d, T) if L.dim else F.zeros((M.dim, M.dim, M.dim))
    bad = np.any(F.sub(lhs, M.table) != 0, axis=2)
    rep.peiffer = [(b, c) for b in range(M.dim) for c in range(M.dim) if bad[b, c]]
    return rep


def identity_crossed_module(L: HomLieAlgebra) -> CrossedModule:
    return CrossedModule(Morphism(L, L, L.field.eye(L.dim), check=False), adjoint_action(L), check=False)


def inclusion_crossed_module(L: HomLieAlgebra, N) -> CrossedModule:
    """N -> L for an alpha-invariant ideal N, with the bracket action."""
    act = action_from_ideal(L, N)
    space = as_subspace(N, L)
    inc = Morphism(act.actee, L, space.basis.T.copy(), check=False)
    return CrossedModule(inc, act, check=True)


# ---------------------------------------------------------------------------
# semidirect products and split extensions


def semidirect(action: HomAction, twisted: bool = False):
    """M x| L on the basis (M, L).

    [(m1, l1), (m2, l2)] = ([m1, m2] + l1 . m2 - l2 . m1, [l1, l2]) with
    alpha = alpha_M + alpha_L.  With ``twisted=True`` the acting elements are
    first moved by alpha_L, which only gives a Hom-Lie algebra in special
    cases (for instance alpha_L = id); the result is validated either way.
    Returns ``(S, inclusion M -> S, projection S -> L)``.
    """
    rep = validate_action(action)
    if not rep.valid:
        raise AlgebraError(f"action axioms fail: {rep.to_json()}")
    L, M = action.actor, action.actee
    F = L.field
    m, l = M.dim, L.dim
    n = m + l
    T = action.tensor
    if twisted and l:
        T = F.einsum("pa,pbk->abk", L.alpha, T)
    table = F.zeros((n, n, n))
    table[:m, :m, :m] = M.table
    table[m:, m:, m:] = L.table
    if l and m:
        table[m:, :m, :m] = T
        table[:m, m:, :m] = F.neg(T.transpose(1, 0, 2))
    alpha = F.zeros((n, n))
    alpha[:m, :m] = M.alpha
    alpha[m:, m:] = L.alpha
    names = list(M.basis_names) + list(L.basis_names)
    if len(set(names)) < n:
        names = [f"m:{b}" for b in M.basis_names] + [f"l:{b}" for b in L.basis_names]
    S = HomLieAlgebra(F, table, alpha, names)
    check = validate(S)
    if not check.valid:
        raise AlgebraError(f"semidirect product is not a Hom-Lie algebra: {check.to_json()}")
    inc = F.zeros((n, m))
    inc[np.arange(m), np.arange(m)] = F.one
    proj = F.zeros((l, n))
    proj[np.arange(l), m + np.arange(l)] = F.one
    return S, Morphism(M, S, inc, check=False), Morphism(S, L, proj, check=False)


@dataclass
class SplitData:
    action: HomAction
    section_is_morphism: bool
    roundtrip_iso: bool | None = None


def split_extension_action(inclusion: Morphism, section, projection: Morphism | None = None) -> HomAction:
    """The action l . m = i^{-1}[eta(l), i(m)] of a split extension M >-> K ->> L.

    ``section`` is a linear section eta: L -> K of the projection, given as a
    Morphism (possibly unchecked) or a matrix together with ``projection``.
    """
    return split_extension(inclusion, section, projection).action


def split_extension(inclusion: Morphism, section, projection: Morphism | None = None) -> SplitData:
    M, K = inclusion.source, inclusion.target
    F = K.field
    i = inclusion.matrix
    if rank(i, F) != M.dim:
        raise AlgebraError("inclusion is not injective")
    im = Subspace.full(F, M.dim).image(i)
    problem = ideal_defect(K, im)
    if problem:
        raise AlgebraError(f"image of the inclusion: {problem}")
    if projection is None:
        if not isinstance(section, Morphism):
            raise AlgebraError("a projection is required when the section is a bare matrix")
        Q, projection = quotient(K, im)
        if Q != section.source:
            raise AlgebraError("section source is not the quotient K / M; pass the projection")
    L = projection.target
    eta = section.matrix if isinstance(section, Morphism) else (
        section if isinstance(section, np.ndarray) else F.array(section))
    if eta.shape != (K.dim, L.dim):
        raise AlgebraError("section has the wrong shape")
    if not F.equal(F.matmul(projection.matrix, eta), F.eye(L.dim)):
        raise AlgebraError("section is not a right inverse of the projection")
    if not F.is_zero(F.matmul(projection.matrix, i)):
        raise AlgebraError("projection does not kill the image of the inclusion")
    if K.dim and rank(projection.matrix, F) + M.dim != K.dim:
        raise AlgebraError("sequence is not exact in the middle")
    tensor = F.zeros((L.dim, M.dim, M.dim))
    if L.dim and M.dim:
        # [eta(l_a), i(m_b)] in K, then pulled back along i
        vals = F.einsum("pa,qb,pqk->abk", eta, i, K.table).reshape(-1, K.dim)
        coords = solve(i, vals.T, F)
        tensor = coords.T.reshape(L.dim, M.dim, M.dim)
    act = HomAction(L, M, tensor, check=False)
    rep = validate_action(act)
    if not rep.valid:
        raise AlgebraError(f"induced action fails axioms: {rep.to_json()}")
    eta_m = Morphism(L, K, eta, check=False)
    return SplitData(act, eta_m.defect() is None)


def semidirect_roundtrip(inclusion: Morphism, section, projection: Morphism | None = None) -> bool:
    """Whether xi(m, l) = i(m) + eta(l) is an isomorphism M x| L -> K."""
    data = split_extension(inclusion, section, projection)
    S, _, _ = semidirect(data.action)
    K = inclusion.target
    F = K.field
    eta = section.matrix if isinstance(section, Morphism) else np.asarray(section)
    xi = np.concatenate([inclusion.matrix, eta], axis=1)
    if rank(xi, F) != K.dim:
        return False
    return Morphism(S, K, xi, check=False).defect() is None
