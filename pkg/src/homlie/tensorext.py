"""Non-abelian tensor and exterior products of Hom-Lie crossed modules.

For crossed modules d1: M -> L and d2: N -> L the tensor product is
realised as the quotient of M (x) N by the span of all basis instances of
the two defining relations

    [m, m'] * alpha(n) = alpha(m) * (m'.n) - alpha(m') * (m.n)
    alpha(m) * [n, n'] = (n'.m) * alpha(n) - (n.m) * alpha(n')

with mutual actions m.n = d1(m).n and n.m = d2(n).m.  The bracket
[m*n, m'*n'] = -(n.m) * (m'.n') factors as lambda_M(x) (x) lambda_N(y), so
it descends exactly when lambda_M and lambda_N kill the relations; every
such fact is checked and recorded in ``certificates``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations

import numpy as np

from .actions import (
    CrossedModule,
    identity_crossed_module,
    inclusion_crossed_module,
)
from .algebra import (
    AlgebraError,
    HomLieAlgebra,
    Morphism,
    abelian,
    abelianization,
    as_subspace,
    axiom_defects,
    quotient,
    validate,
)
from .exactlin import Field, Subspace, nullspace, rank
from .exactlin.linalg import column_space, solve


class TensorError(AlgebraError):
    """A product construction failed one of its well-definedness checks."""


def _require_odd_characteristic(F: Field):
    if F.characteristic == 2:
        raise TensorError("characteristic 2 is not supported by the square and Gamma constructions")


def _kron_vec(F, u, v):
    return F.mul(u[:, None], v[None, :]).reshape(-1)


def _outer_span(F, U: Subspace, V: Subspace, ambient: int) -> Subspace:
    """span{u (x) v} for u, v running over bases of U and V."""
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(F, ambient)
    rows = F.mul(U.basis[:, None, :, None], V.basis[None, :, None, :])
    return Subspace.span(F, rows.reshape(U.dim * V.dim, -1), ambient)


@dataclass
class ProductResult:
    """Tensor (``kind='tensor'``) or exterior (``kind='exterior'``) product."""

    kind: str
    cm1: CrossedModule
    cm2: CrossedModule
    relation_space: Subspace
    quotient_map: np.ndarray
    lift: np.ndarray
    algebra: HomLieAlgebra
    lam: Morphism
    lam_M: Morphism
    lam_N: Morphism
    lam_full: np.ndarray
    lam_M_full: np.ndarray
    lam_N_full: np.ndarray
    act_MN: np.ndarray
    act_NM: np.ndarray
    certificates: dict = dc_field(default_factory=dict)
    square_full: Subspace | None = None
    tensor: "ProductResult | None" = None
    literal_relations: Subspace | None = None
    closure_dim: int = 0

    @property
    def M(self) -> HomLieAlgebra:
        return self.cm1.M

    @property
    def N(self) -> HomLieAlgebra:
        return self.cm2.M

    @property
    def L(self) -> HomLieAlgebra:
        return self.cm1.L

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def ambient_dim(self) -> int:
        return self.M.dim * self.N.dim

    @property
    def alpha_star(self) -> np.ndarray:
        return self.algebra.alpha

    @property
    def basis(self) -> list[tuple[int, int]]:
        """Quotient basis as index pairs (a, b) standing for m_a (x) n_b."""
        nN = self.N.dim
        return [divmod(c, nN) for c in self.relation_space.complement_indices()]

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())

    def element(self, m, n):
        """Coordinates of m * n in the quotient basis."""
        F = self.field
        return F.matmul(self.quotient_map, _kron_vec(F, np.asarray(m), np.asarray(n)))

    def project(self, vectors):
        """Quotient coordinates of vectors (rows) of M (x) N."""
        return self.field.matmul(np.asarray(vectors), self.quotient_map.T)

    @cached_property
    def kernel_lambda(self) -> Subspace:
        return self.lam.kernel

    def to_json(self):
        F = self.field
        return {
            "kind": self.kind,
            "dim": self.dim,
            "ambient_dim": self.ambient_dim,
            "relation_rank": self.relation_space.dim,
            "closure_rank": self.closure_dim,
            "basis": [[int(a), int(b)] for a, b in self.basis],
            "basis_names": list(self.algebra.basis_names),
            "lambda": [[F.to_json(x) for x in row] for row in self.lam.matrix],
            "lambda_M": [[F.to_json(x) for x in row] for row in self.lam_M.matrix],
            "lambda_N": [[F.to_json(x) for x in row] for row in self.lam_N.matrix],
            "alpha": [[F.to_json(x) for x in row] for row in self.algebra.alpha.T],
            "kernel_lambda_dim": self.kernel_lambda.dim,
            "certificates": dict(sorted(self.certificates.items())),
        }


def mutual_actions(cm1: CrossedModule, cm2: CrossedModule):
    """Returns (act_MN, act_NM) with act_MN[a, b] = m_a . n_b and act_NM[b, a] = n_b . m_a."""
    F = cm1.L.field
    d1, d2 = cm1.boundary.matrix, cm2.boundary.matrix
    T1, T2 = cm1.action.tensor, cm2.action.tensor
    M, N = cm1.M, cm2.M
    if cm1.L.dim == 0:
        return F.zeros((M.dim, N.dim, N.dim)), F.zeros((N.dim, M.dim, M.dim))
    act_MN = F.einsum("la,lbk->abk", d1, T2)
    act_NM = F.einsum("lb,lak->bak", d2, T1)
    return act_MN, act_NM


def relation_rows(M, N, act_MN, act_NM):
    """All basis instances of the two defining relations, as rows of M (x) N."""
    F = M.field
    m, n = M.dim, N.dim
    rows = []
    if m >= 2 and n:
        # [m_x, m_y] (x) alpha(n_b) - alpha(m_x) (x) (m_y . n_b) + alpha(m_y) (x) (m_x . n_b)
        t1 = F.einsum("xyp,qb->xybpq", M.table, N.alpha)
        t2 = F.einsum("px,ybq->xybpq", M.alpha, act_MN)
        r4 = F.add(F.sub(t1, t2), t2.transpose(1, 0, 2, 3, 4))
        iu = np.triu_indices(m, 1)
        rows.append(r4[iu].reshape(-1, m * n))
    if n >= 2 and m:
        # alpha(m_a) (x) [n_b, n_c] - (n_c . m_a) (x) alpha(n_b) + (n_b . m_a) (x) alpha(n_c)
        t1 = F.einsum("pa,bcq->abcpq", M.alpha, N.table)
        t2 = F.einsum("cap,qb->abcpq", act_NM, N.alpha)
        r5 = F.add(F.sub(t1, t2), t2.transpose(0, 2, 1, 3, 4))
        iu = np.triu_indices(n, 1)
        r5 = r5.transpose(1, 2, 0, 3, 4)[iu]
        rows.append(r5.reshape(-1, m * n))
    if not rows:
        return F.zeros((0, m * n))
    return np.concatenate(rows)


def _lambda_matrices(cm1: CrossedModule, cm2: CrossedModule, act_MN, act_NM):
    F = cm1.L.field
    M, N, L = cm1.M, cm2.M, cm1.L
    m, n = M.dim, N.dim
    d1, d2 = cm1.boundary.matrix, cm2.boundary.matrix
    if L.dim and m and n:
        lam = F.einsum("ia,jb,ijk->kab", d1, d2, L.table).reshape(L.dim, m * n)
    else:
        lam = F.zeros((L.dim, m * n))
    lam_M = F.neg(act_NM.transpose(2, 1, 0)).reshape(m, m * n) if m and n else F.zeros((m, m * n))
    lam_N = act_MN.transpose(2, 0, 1).reshape(n, m * n) if m and n else F.zeros((n, m * n))
    return lam, lam_M, lam_N


def _quotient_structure(F, R: Subspace, m, n, lam_M, lam_N, kron_alpha):
    Q = R.quotient_matrix()
    comp = list(R.complement_indices())
    k = len(comp)
    if not k:
        return Q, F.zeros((0, 0, 0)), F.zeros((0, 0))
    LM = lam_M[:, comp]
    LN = lam_N[:, comp]
    X = F.einsum("as,kab->sbk", LM, Q.reshape(k, m, n))
    table = F.einsum("bt,sbk->stk", LN, X)
    alpha = F.matmul(Q, kron_alpha[:, comp])
    return Q, table, alpha


def _closure_step(F, R: Subspace, lam_M, lam_N, kron_alpha, imM, imN) -> Subspace:
    """Smallest enlargement of R that is alpha-stable and a two-sided bracket ideal."""
    m, n = lam_M.shape[0], lam_N.shape[0]
    while True:
        if R.dim == 0:
            return R
        parts = [R, R.image(kron_alpha)]
        parts.append(_outer_span(F, R.image(lam_M), imN, m * n))
        parts.append(_outer_span(F, imM, R.image(lam_N), m * n))
        new = parts[0]
        for p in parts[1:]:
            new = new + p
        if new.dim == R.dim:
            return R
        R = new


def _build(kind, cm1, cm2, R: Subspace, act_MN, act_NM, lam, lam_M, lam_N, extra_certs=None, names_sep="*"):
    F = cm1.L.field
    M, N, L = cm1.M, cm2.M, cm1.L
    m, n = M.dim, N.dim
    certs = dict(extra_certs or {})
    kron_alpha = F.kron(M.alpha, N.alpha)
    literal = R
    if R.dim:
        certs["alpha_preserves_relations"] = R.contains(F.matmul(R.basis, kron_alpha.T))
        lamM_R, lamN_R = R.image(lam_M), R.image(lam_N)
    else:
        certs["alpha_preserves_relations"] = True
        lamM_R, lamN_R = Subspace.zero(F, m), Subspace.zero(F, n)
    # the bilinear lift of the bracket sends R x (M (x) N) and (M (x) N) x R into R
    imM = column_space(lam_M, F) if m * n else Subspace.zero(F, m)
    imN = column_space(lam_N, F) if m * n else Subspace.zero(F, n)
    certs["bracket_left_well_defined"] = _outer_span(F, lamM_R, imN, m * n) <= R
    certs["bracket_right_well_defined"] = _outer_span(F, imM, lamN_R, m * n) <= R
    if not (certs["alpha_preserves_relations"] and certs["bracket_left_well_defined"]
            and certs["bracket_right_well_defined"]):
        raise TensorError(f"{kind} product is not well defined: {certs}")

    # The product is the Hom-Lie algebra generated by the symbols, so any
    # element forced to vanish by skewness or Hom-Jacobi is also a relation.
    # Outside the surjective-alpha world the two bilinear relation families
    # need not imply these, hence the closure loop.
    for _ in range(m * n + 1):
        Q, table, alpha = _quotient_structure(F, R, m, n, lam_M, lam_N, kron_alpha)
        probe = HomLieAlgebra(F, table, alpha)
        if validate(probe).valid:
            break
        defects = axiom_defects(probe)
        extra = Subspace.span(F, F.matmul(defects, R.lift_matrix().T), m * n)
        R = _closure_step(F, R + extra, lam_M, lam_N, kron_alpha, imM, imN)
    closure_dim = R.dim - literal.dim
    certs["lambda_kills_relations"] = F.is_zero(F.matmul(lam, R.basis.T)) if R.dim else True
    certs["lambda_M_kills_relations"] = R.image(lam_M).dim == 0 if R.dim else True
    certs["lambda_N_kills_relations"] = R.image(lam_N).dim == 0 if R.dim else True

    S = R.lift_matrix()
    comp = list(R.complement_indices())
    k = len(comp)
    names = [f"{M.basis_names[c // n]}{names_sep}{N.basis_names[c % n]}" for c in comp]
    alg = HomLieAlgebra(F, table, alpha, names, name=f"{M.name}{names_sep}{N.name}" if M.name else "")
    rep = validate(alg)
    certs["quotient_is_hom_lie"] = rep.valid
    if not rep.valid:
        raise TensorError(f"{kind} product fails the Hom-Lie axioms: {rep.to_json()}")
    lam_q = Morphism(alg, L, F.matmul(lam, S) if k else F.zeros((L.dim, 0)), check=False)
    lamM_q = Morphism(alg, M, F.matmul(lam_M, S) if k else F.zeros((m, 0)), check=False)
    lamN_q = Morphism(alg, N, F.matmul(lam_N, S) if k else F.zeros((n, 0)), check=False)
    for label, mor in (("lambda", lam_q), ("lambda_M", lamM_q), ("lambda_N", lamN_q)):
        certs[f"{label}_is_morphism"] = mor.defect() is None
        certs[f"ker_{label}_central"] = mor.kernel <= alg.center
    return ProductResult(
        kind=kind, cm1=cm1, cm2=cm2, relation_space=R, quotient_map=Q, lift=S,
        algebra=alg, lam=lam_q, lam_M=lamM_q, lam_N=lamN_q,
        lam_full=lam, lam_M_full=lam_M, lam_N_full=lam_N,
        act_MN=act_MN, act_NM=act_NM, certificates=certs,
        literal_relations=literal, closure_dim=closure_dim,
    )


def tensor_product(cm1: CrossedModule, cm2: CrossedModule, check_compatibility: bool = True) -> ProductResult:
    """M * N for two crossed modules over the same algebra."""
    if cm1.L is not cm2.L and cm1.L != cm2.L:
        raise TensorError("crossed modules over different algebras")
    F = cm1.L.field
    act_MN, act_NM = mutual_actions(cm1, cm2)
    M, N = cm1.M, cm2.M
    rows = relation_rows(M, N, act_MN, act_NM)
    R = Subspace.span(F, rows, M.dim * N.dim)
    lam, lam_M, lam_N = _lambda_matrices(cm1, cm2, act_MN, act_NM)
    t = _build("tensor", cm1, cm2, R, act_MN, act_NM, lam, lam_M, lam_N)
    if check_compatibility:
        t.certificates.update(_compatibility(t))
    return t


def _l_action_full(t: ProductResult):
    """Matrices of l . (m (x) n) = (l.m) (x) alpha(n) + alpha(m) (x) (l.n) on M (x) N."""
    F = t.field
    T1, T2 = t.cm1.action.tensor, t.cm2.action.tensor
    M, N = t.M, t.N
    out = []
    for l in range(t.L.dim):
        A1 = T1[l].T  # column a = l . m_a
        A2 = T2[l].T
        out.append(F.add(F.kron(A1, N.alpha), F.kron(M.alpha, A2)))
    return out


def _compatibility(t: ProductResult) -> dict:
    """Induced L-action on the product and the two compatibility identities."""
    F = t.field
    L = t.L
    certs = {}
    R = t.relation_space
    acts_full = _l_action_full(t)
    if R.dim:
        certs["l_action_well_defined"] = all(R.contains(F.matmul(R.basis, a.T)) for a in acts_full)
    else:
        certs["l_action_well_defined"] = True
    k = t.dim
    if k == 0 or L.dim == 0:
        certs["compatibility_lambda"] = True
        certs["compatibility_action"] = True
        return certs
    acts = np.stack([F.matmul(t.quotient_map, F.matmul(a, t.lift)) for a in acts_full])
    lam = t.lam.matrix
    # lambda(l . x) = [alpha(l), lambda(x)]
    lhs = F.einsum("ki,lij->lkj", lam, acts)
    ad_alpha = F.einsum("pl,pqk->lkq", L.alpha, L.table)
    rhs = F.einsum("lkq,qj->lkj", ad_alpha, lam)
    certs["compatibility_lambda"] = F.equal(lhs, rhs)
    # lambda(x) . x' = [alpha(x), x']
    lhs = F.einsum("ls,lij->sij", lam, acts)
    rhs = F.einsum("rs,rtk->skt", t.algebra.alpha, t.algebra.table)
    certs["compatibility_action"] = F.equal(lhs, rhs)
    return certs


def matched_pairs(t: ProductResult) -> Subspace:
    """{(m, n) : d1(m) = d2(n)} inside M + N."""
    F = t.field
    d1, d2 = t.cm1.boundary.matrix, t.cm2.boundary.matrix
    m, n = t.M.dim, t.N.dim
    if t.L.dim == 0:
        return Subspace.full(F, m + n)
    return nullspace(np.concatenate([d1, F.neg(d2)], axis=1), F)


def square_full(t: ProductResult) -> Subspace:
    """span{m (x) n : d1 m = d2 n} inside M (x) N, by polarisation over matched pairs."""
    F = t.field
    _require_odd_characteristic(F)
    m, n = t.M.dim, t.N.dim
    P = matched_pairs(t)
    if P.dim == 0 or m * n == 0:
        return Subspace.zero(F, m * n)
    ms, ns = P.basis[:, :m], P.basis[:, m:]
    rows = [_kron_vec(F, ms[i], ns[i]) for i in range(P.dim)]
    for i, j in combinations(range(P.dim), 2):
        rows.append(F.add(_kron_vec(F, ms[i], ns[j]), _kron_vec(F, ms[j], ns[i])))
    return Subspace.span(F, np.stack(rows), m * n)


def square(t: ProductResult) -> Subspace:
    """The square M [] N as a subspace of the tensor product."""
    S = square_full(t)
    F = t.field
    if S.dim == 0:
        return Subspace.zero(F, t.dim)
    return Subspace.span(F, t.project(S.basis), t.dim)


def exterior_product(t: ProductResult) -> ProductResult:
    """M ^ N = (M * N) / (M [] N)."""
    if t.kind != "tensor":
        raise TensorError("exterior_product expects a tensor product")
    S = square_full(t)
    sq = square(t)
    extra = {"square_central": sq <= t.algebra.center}
    R = t.relation_space + S
    e = _build("exterior", t.cm1, t.cm2, R, t.act_MN, t.act_NM, t.lam_full, t.lam_M_full,
               t.lam_N_full, extra_certs=extra, names_sep="^")
    e.square_full = S
    e.tensor = t
    return e


# ---------------------------------------------------------------------------
# convenience constructors


def tensor_square(L: HomLieAlgebra) -> ProductResult:
    cm = identity_crossed_module(L)
    return tensor_product(cm, cm)


def exterior_square(L: HomLieAlgebra, t: ProductResult | None = None) -> ProductResult:
    return exterior_product(t if t is not None else tensor_square(L))


def induced_map(src: ProductResult, tgt: ProductResult, fM, fN) -> np.ndarray:
    """Matrix of m * n -> f(m) * g(n) between two products, checked to be well defined."""
    F = src.field
    K = F.kron(np.asarray(fM), np.asarray(fN))
    R = src.relation_space
    if R.dim and not tgt.relation_space.contains(F.matmul(R.basis, K.T)):
        raise TensorError("map does not descend to the quotients")
    if src.dim == 0 or tgt.dim == 0:
        return F.zeros((tgt.dim, src.dim))
    return F.matmul(tgt.quotient_map, F.matmul(K, src.lift))


# ---------------------------------------------------------------------------
# the quadratic functor


@dataclass
class GammaSpace:
    """Gamma(V) on the basis gamma(e_i), then gamma_ij for i < j."""

    field: Field
    source_dim: int
    source_alpha: np.ndarray
    labels: list
    alpha_gamma: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.labels)

    def pairs(self):
        return list(combinations(range(self.source_dim), 2))

    def gamma_of(self, v):
        """Coordinates of gamma(v) = sum c_i^2 gamma(e_i) + sum_{i<j} c_i c_j gamma_ij."""
        v = np.asarray(v)
        vals = [v[i] * v[i] for i in range(self.source_dim)]
        vals += [v[i] * v[j] for i, j in self.pairs()]
        return self.field.array(vals)

    def as_algebra(self) -> HomLieAlgebra:
        return abelian(self.dim, self.alpha_gamma, self.field)


def gamma(dim: int, alpha=None, field: Field | None = None) -> GammaSpace:
    """Whitehead's quadratic functor on the Hom-vector space (F^dim, alpha)."""
    from .exactlin import QQ

    if isinstance(dim, HomLieAlgebra):
        field = dim.field
        alpha = dim.alpha
        dim = dim.dim
    F = field or QQ
    _require_odd_characteristic(F)
    A = F.eye(dim) if alpha is None else (alpha if isinstance(alpha, np.ndarray) else F.array(alpha))
    pairs = list(combinations(range(dim), 2))
    labels = [f"g({i})" for i in range(dim)] + [f"g({i},{j})" for i, j in pairs]
    N = dim + len(pairs)
    G = GammaSpace(F, dim, A, labels, F.zeros((N, N)))
    ag = F.zeros((N, N))
    for i in range(dim):
        ag[:, i] = G.gamma_of(A[:, i])
    for c, (i, j) in enumerate(pairs):
        a, b = A[:, i], A[:, j]
        vals = [2 * a[k] * b[k] for k in range(dim)]
        vals += [a[k] * b[l] + a[l] * b[k] for k, l in pairs]
        ag[:, dim + c] = F.array(vals)
    G.alpha_gamma = ag
    return G


# ---------------------------------------------------------------------------
# the map Gamma(L^ab) -> L * L


@dataclass
class PsiResult:
    morphism: Morphism
    gamma: GammaSpace
    tensor: ProductResult
    certificates: dict

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())


def psi_gamma_map(L: HomLieAlgebra, t: ProductResult | None = None) -> PsiResult:
    """gamma(x) -> x * x from Gamma(L^ab) into L * L, for surjective alpha."""
    if not L.alpha_surjective:
        raise TensorError("the map from Gamma(L^ab) needs a surjective alpha")
    F = L.field
    _require_odd_characteristic(F)
    t = t if t is not None else tensor_square(L)
    Lab, _ = abelianization(L)
    G = gamma(Lab)
    comp = list(L.derived.complement_indices())
    k = len(comp)
    n = L.dim
    cols = []
    E = F.eye(n)
    for i in range(k):
        e = E[comp[i]]
        cols.append(t.element(e, e))
    for i, j in combinations(range(k), 2):
        a, b = E[comp[i]], E[comp[j]]
        cols.append(F.add(t.element(a, b), t.element(b, a)))
    mat = np.stack(cols, axis=1) if cols else F.zeros((t.dim, 0))
    Galg = G.as_algebra()
    psi = Morphism(Galg, t.algebra, mat, check=False)
    certs = {}
    # independence of the lift: c (x) y + y (x) c vanishes for c in [L, L]
    D = L.derived
    ok = True
    for c in D.basis:
        for y in E:
            if not F.is_zero(F.add(t.element(c, y), t.element(y, c))):
                ok = False
                break
        if not ok:
            break
    certs["psi_well_defined"] = ok
    certs["psi_is_morphism"] = psi.defect() is None
    certs["psi_injective"] = psi.injective
    certs["psi_image_is_square"] = psi.image == square(t)
    lab_t = tensor_square(Lab)
    certs["square_dims_agree"] = square(t).dim == square(lab_t).dim
    return PsiResult(psi, G, t, certs)


def j2(L: HomLieAlgebra, t: ProductResult | None = None) -> int:
    t = t if t is not None else tensor_square(L)
    return t.lam.kernel.dim


# ---------------------------------------------------------------------------
# extensions


@dataclass
class ExactnessReport:
    checks: dict = dc_field(default_factory=dict)
    dims: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        return {"ok": self.ok, "checks": dict(sorted(self.checks.items())),
                "dims": dict(sorted(self.dims.items()))}


@dataclass
class Extension:
    """M >-> K ->> L = K / M with the products needed by the exactness checks."""

    K: HomLieAlgebra
    M_space: Subspace
    L: HomLieAlgebra
    projection: Morphism
    M: HomLieAlgebra
    inclusion: Morphism
    MK: ProductResult  # M ^ K
    KK: ProductResult  # K ^ K
    LL: ProductResult  # L ^ L
    iota: np.ndarray  # M ^ K -> K ^ K
    pi: np.ndarray  # K ^ K -> L ^ L
    section: np.ndarray | None = None


def build_extension(K: HomLieAlgebra, M, section=None) -> Extension:
    F = K.field
    space = as_subspace(M, K)
    L, proj = quotient(K, space)
    cm_M = inclusion_crossed_module(K, space)
    cm_K = identity_crossed_module(K)
    MK = exterior_product(tensor_product(cm_M, cm_K))
    KK = exterior_square(K)
    LL = exterior_square(L)
    inc = cm_M.boundary
    iota = induced_map(MK, KK, inc.matrix, F.eye(K.dim))
    pi = induced_map(KK, LL, proj.matrix, proj.matrix)
    sec = None
    if section is not None:
        sec = section.matrix if isinstance(section, Morphism) else (
            section if isinstance(section, np.ndarray) else F.array(section))
        if not F.equal(F.matmul(proj.matrix, sec), F.eye(L.dim)):
            raise AlgebraError("section is not a right inverse of the projection")
    return Extension(K, space, L, proj, cm_M.M, inc, MK, KK, LL, iota, pi, sec)


def image_of(F, mat, ambient) -> Subspace:
    if mat.shape[1] == 0:
        return Subspace.zero(F, ambient)
    return column_space(mat, F)


def kernel_of(F, mat, n) -> Subspace:
    if mat.shape[0] == 0:
        return Subspace.full(F, n)
    return nullspace(mat, F)


def exterior_sequence_check(K: HomLieAlgebra, M, section=None, ext: Extension | None = None) -> ExactnessReport:
    """M ^ K -> K ^ K ->> L ^ L: image equals kernel; injective on the left if split."""
    ext = ext or build_extension(K, M, section)
    F = K.field
    rep = ExactnessReport()
    im = image_of(F, ext.iota, ext.KK.dim)
    ker = kernel_of(F, ext.pi, ext.KK.dim)
    rep.dims.update({"M^K": ext.MK.dim, "K^K": ext.KK.dim, "L^L": ext.LL.dim,
                     "image": im.dim, "kernel": ker.dim})
    rep.checks["middle_exact"] = im == ker
    rep.checks["right_surjective"] = rank(ext.pi, F) == ext.LL.dim if ext.pi.size else ext.LL.dim == 0
    # K ^ M has the same image in K ^ K as M ^ K
    KM = exterior_product(tensor_product(identity_crossed_module(K), inclusion_crossed_module(K, ext.M_space)))
    kappa = induced_map(KM, ext.KK, F.eye(K.dim), ext.inclusion.matrix)
    rep.checks["left_images_agree"] = image_of(F, kappa, ext.KK.dim) == im
    if ext.section is not None:
        rep.dims["left_rank"] = im.dim
        rep.checks["split_left_injective"] = im.dim == ext.MK.dim
    return rep


def restrict(F, mat, src: Subspace, tgt: Subspace):
    """Matrix of mat restricted to src, in the RREF coordinates of src and tgt."""
    if src.dim == 0:
        return F.zeros((tgt.dim, 0))
    img = F.matmul(src.basis, mat.T)
    if not tgt.contains(img):
        raise TensorError("map does not land in the expected subspace")
    return np.asarray(img[:, list(tgt.pivots)]).T if tgt.dim else F.zeros((0, src.dim))


# ---------------------------------------------------------------------------
# central extensions


@dataclass
class LiftResult:
    psi: Morphism
    certificates: dict
    unique: bool
    lift_space_dim: int

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())


def central_extension_lift(phi: Morphism, ext: ProductResult | None = None) -> LiftResult:
    """psi: L ^ L -> K with psi(l1 ^ l2) = [k1, k2] for preimages k_i of l_i."""
    K, L = phi.source, phi.target
    F = K.field
    if not phi.surjective:
        raise AlgebraError("the extension map must be surjective")
    ker = phi.kernel
    if not ideal_is_central(K, ker):
        raise AlgebraError("extension is not central")
    ext = ext if ext is not None else exterior_square(L)
    n = L.dim
    sigma = solve(phi.matrix, F.eye(n), F)  # a linear section
    full = F.einsum("pa,qb,pqk->kab", sigma, sigma, K.table).reshape(K.dim, n * n) if n else F.zeros((K.dim, 0))
    R = ext.relation_space
    certs = {}
    certs["relations_vanish"] = F.is_zero(F.matmul(full, R.basis.T)) if R.dim else True
    psi_mat = F.matmul(full, ext.lift) if ext.dim else F.zeros((K.dim, 0))
    psi = Morphism(ext.algebra, K, psi_mat, check=False)
    certs["psi_is_morphism"] = psi.defect() is None
    certs["phi_psi_is_lambda"] = F.equal(F.matmul(phi.matrix, psi_mat), ext.lam.matrix)
    # other lifts differ by maps L ^ L -> ker(phi) killing [L^L, L^L] and commuting with alpha
    W = ext.algebra
    w = W.dim
    mdim = ker.dim
    if w == 0 or mdim == 0:
        free = 0
    else:
        B = ker.basis.T  # columns: basis of ker(phi) in K
        AM = solve(B, F.matmul(K.alpha, B), F)  # alpha on ker(phi)
        D = W.derived
        blocks = []
        if D.dim:
            blocks.append(F.kron(F.eye(mdim), D.basis))
        blocks.append(F.sub(F.kron(F.eye(mdim), W.alpha.T), F.kron(AM, F.eye(w))))
        free = nullspace(np.concatenate(blocks), F).dim
    return LiftResult(psi, certs, free == 0, free)


def ideal_is_central(K: HomLieAlgebra, space: Subspace) -> bool:
    return space <= K.center


@dataclass
class UceReport:
    checks: dict
    dims: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def uce_check(L: HomLieAlgebra, multiplier_dim: int | None = None) -> UceReport:
    """For perfect L: L ^ L = L * L, ker(lambda) central and of dimension H2(L)."""
    if not L.is_perfect:
        raise AlgebraError("algebra is not perfect")
    t = tensor_square(L)
    e = exterior_product(t)
    checks = {
        "square_vanishes": square(t).dim == 0,
        "dims_agree": e.dim == t.dim,
        "kernel_central": e.lam.kernel <= e.algebra.center,
    }
    if multiplier_dim is None:
        from .homology import homology

        multiplier_dim = homology(L, up_to=2).dims[2]
    checks["kernel_is_multiplier"] = e.lam.kernel.dim == multiplier_dim
    return UceReport(checks, {"L^L": e.dim, "L*L": t.dim, "ker_lambda": e.lam.kernel.dim,
                              "H2": multiplier_dim})
