"""Hom-Chevalley-Eilenberg homology and the multiplier cross-checks.

C_n = M (x) Lambda^n L with

    d_n(m (x) x_1 ^ ... ^ x_n)
        = sum_r (-1)^r (x_r . m) (x) alpha(x_1) ^ ..^ alpha(x_r)^ .. ^ alpha(x_n)
        + sum_{r<s} (-1)^(r+s) alpha(m) (x) [x_r, x_s] ^ alpha(x_1) ^ ..

where ^ on a factor means it is left out.  d_2 is taken with the opposite
global sign so that d_2(x ^ y) = [x, y] for trivial coefficients; signs of
boundaries do not change kernels or images.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .actions import HomAction
from .algebra import AlgebraError, HomLieAlgebra, abelianization, direct_sum
from .exactlin import Field, Subspace
from .exactlin.linalg import solve
from .tensorext import (
    ExactnessReport,
    Extension,
    build_extension,
    exterior_square,
    gamma,
    image_of,
    kernel_of,
    restrict,
    tensor_square,
)


class OracleMismatch(AssertionError):
    """Two independent computations of the same invariant disagree."""


# ---------------------------------------------------------------------------
# exterior powers


@lru_cache(maxsize=None)
def wedge_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Basis monomials e_I of Lambda^k F^n, I increasing, in lexicographic order."""
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def _wedge_index(n: int, k: int) -> dict:
    return {I: c for c, I in enumerate(wedge_basis(n, k))}


@lru_cache(maxsize=None)
def wedge_product_table(n: int, k: int) -> np.ndarray:
    """mu[i, J, I] = sign with e_i ^ e_J = sign * e_I, for e_J in Lambda^k."""
    src = wedge_basis(n, k)
    idx = _wedge_index(n, k + 1)
    mu = np.zeros((n, len(src), comb(n, k + 1)), dtype=np.int64)
    for c, J in enumerate(src):
        for i in range(n):
            if i in J:
                continue
            before = sum(1 for j in J if j < i)
            I = tuple(sorted(J + (i,)))
            mu[i, c, idx[I]] = -1 if before % 2 else 1
    return mu


def compound_alpha(F: Field, A, k: int) -> np.ndarray:
    """Matrix of alpha^{^k} on Lambda^k, columns indexed like ``wedge_basis``."""
    n = A.shape[0]
    if k == 0:
        return F.eye(1)
    if k == 1:
        return A
    if k > n:
        return F.zeros((0, 0))
    prev = compound_alpha(F, A, k - 1)
    mu = F.array(wedge_product_table(n, k - 1))
    idx = _wedge_index(n, k - 1)
    out = F.zeros((comb(n, k), comb(n, k)))
    for c, J in enumerate(wedge_basis(n, k)):
        # alpha e_{j1} ^ alpha^{^(k-1)} e_{rest}
        out[:, c] = F.einsum("i,j,ijI->I", A[:, J[0]], prev[:, idx[J[1:]]], mu)
    return out


def _wedge_mul(F, v, w, mu):
    """v ^ w for v in L and w in Lambda^k."""
    return F.einsum("i,j,ijI->I", v, w, mu)


# ---------------------------------------------------------------------------
# coefficient modules


@dataclass
class Coefficients:
    """An abelian Hom-module (M, alpha_M) with action tensor act[l, a] = e_l . m_a."""

    dim: int
    alpha: np.ndarray
    act: np.ndarray

    @classmethod
    def trivial(cls, L: HomLieAlgebra) -> "Coefficients":
        F = L.field
        return cls(1, F.eye(1), F.zeros((L.dim, 1, 1)))

    @classmethod
    def from_action(cls, action: HomAction) -> "Coefficients":
        M = action.actee
        if not M.is_abelian:
            raise AlgebraError("coefficient module must be abelian")
        return cls(M.dim, M.alpha, action.tensor)

    @property
    def is_trivial(self) -> bool:
        return self.dim == 1 and not np.any(self.act != 0)


def _coefficients(L, M) -> Coefficients:
    if M is None:
        return Coefficients.trivial(L)
    if isinstance(M, Coefficients):
        return M
    if isinstance(M, HomAction):
        return Coefficients.from_action(M)
    raise TypeError("coefficients must be None, Coefficients or a HomAction")


@dataclass
class ChainComplex:
    algebra: HomLieAlgebra
    module: Coefficients
    max_degree: int
    boundaries: dict
    alphas: dict

    def dim(self, n: int) -> int:
        return self.module.dim * comb(self.algebra.dim, n)

    def d(self, n: int) -> np.ndarray:
        """d_n : C_n -> C_{n-1}; zero map outside 1..dim L."""
        if n in self.boundaries:
            return self.boundaries[n]
        F = self.algebra.field
        return F.zeros((self.dim(n - 1) if n >= 1 else 0, self.dim(n)))

    def alpha(self, n: int) -> np.ndarray:
        return self.alphas[n]


def boundary(n: int, L: HomLieAlgebra, M=None, alpha_cache=None) -> np.ndarray:
    """Matrix of d_n on the bases m_a (x) e_J, index a * C(dim L, n) + J."""
    if n < 1:
        raise ValueError("n must be at least 1")
    F = L.field
    mod = _coefficients(L, M)
    d, m = L.dim, mod.dim
    src = wedge_basis(d, n)
    tgt_len = comb(d, n - 1)
    out = F.zeros((m * tgt_len, m * len(src)))
    if n > d:
        return out
    cache = alpha_cache if alpha_cache is not None else {}

    def calpha(k):
        if k not in cache:
            cache[k] = compound_alpha(F, L.alpha, k)
        return cache[k]

    idx1 = _wedge_index(d, n - 1)
    A1 = calpha(n - 1)
    A2 = calpha(n - 2) if n >= 2 else None
    idx2 = _wedge_index(d, n - 2) if n >= 2 else None
    mu = F.array(wedge_product_table(d, n - 2)) if n >= 2 else None
    trivial_action = not np.any(mod.act != 0)
    for c, J in enumerate(src):
        # bracket terms, shared by every coefficient basis vector
        second = F.zeros(tgt_len)
        for r, s in combinations(range(n), 2):
            v = L.table[J[r], J[s]]
            if not np.any(v != 0):
                continue
            rest = tuple(j for t, j in enumerate(J) if t not in (r, s))
            term = _wedge_mul(F, v, A2[:, idx2[rest]], mu)
            # (-1)^((r+1)+(s+1)) with 1-based positions
            second = F.sub(second, term) if (r + s) % 2 else F.add(second, term)
        for a in range(m):
            col = F.mul(mod.alpha[:, a][:, None], second[None, :]).reshape(-1)
            if not trivial_action:
                for r in range(n):
                    rest = J[:r] + J[r + 1:]
                    term = F.mul(mod.act[J[r], a][:, None], A1[:, idx1[rest]][None, :]).reshape(-1)
                    col = F.add(col, term) if r % 2 else F.sub(col, term)
            out[:, a * len(src) + c] = col
    if n == 2:
        out = F.neg(out)
    return out


def chain_complex(L: HomLieAlgebra, M=None, max_degree: int = 3) -> ChainComplex:
    F = L.field
    mod = _coefficients(L, M)
    cache: dict = {}
    top = max_degree + 1
    bounds = {n: boundary(n, L, mod, cache) for n in range(1, top + 1)}
    alphas = {}
    for n in range(0, top + 1):
        if n not in cache:
            cache[n] = compound_alpha(F, L.alpha, n) if n <= L.dim else F.zeros((0, 0))
        alphas[n] = F.kron(mod.alpha, cache[n])
    return ChainComplex(L, mod, max_degree, bounds, alphas)


def complex_defects(cx: ChainComplex) -> dict:
    """Failures of d o d = 0 and of alpha-equivariance, per degree."""
    F = cx.algebra.field
    out = {}
    for n in range(1, cx.max_degree + 1):
        d, d_up = cx.d(n), cx.d(n + 1)
        if d.size and d_up.size and not F.is_zero(F.matmul(d, d_up)):
            out[f"dd_{n}"] = "d_n d_(n+1) != 0"
        if d.size and not F.equal(F.matmul(d, cx.alpha(n)), F.matmul(cx.alpha(n - 1), d)):
            out[f"alpha_{n}"] = "d_n does not commute with alpha"
    return out


@dataclass
class HomologyReport:
    dims: dict
    induced_alpha: dict
    witnesses: dict
    field: Field = dc_field(repr=False, default=None)

    def to_json(self, witnesses: bool = False):
        F = self.field
        out = {
            "dims": {str(n): d for n, d in sorted(self.dims.items())},
            "induced_alpha": {
                str(n): [[F.to_json(x) for x in row] for row in a] for n, a in sorted(self.induced_alpha.items())
            },
        }
        if witnesses:
            out["witnesses"] = {
                str(n): [[F.to_json(x) for x in row] for row in w.T] for n, w in sorted(self.witnesses.items())
            }
        return out


def _homology_at(F, d_n, d_up, alpha_n, dim_n):
    Z = kernel_of(F, d_n, dim_n) if d_n.shape[0] else Subspace.full(F, dim_n)
    if Z.dim == 0:
        return 0, F.zeros((0, 0)), F.zeros((dim_n, 0))
    B = image_of(F, d_up, dim_n) if d_up.size else Subspace.zero(F, dim_n)
    # boundaries in cycle coordinates
    Bz = Subspace.span(F, B.basis[:, list(Z.pivots)], Z.dim) if B.dim else Subspace.zero(F, Z.dim)
    lift = Bz.lift_matrix()
    reps = F.matmul(Z.basis.T, lift)
    q = Bz.quotient_matrix()
    images = F.matmul(alpha_n, reps)
    induced = F.matmul(q, images[list(Z.pivots), :]) if reps.shape[1] else F.zeros((0, 0))
    return lift.shape[1], induced, reps


def homology(L: HomLieAlgebra, M=None, up_to: int = 2, complex_: ChainComplex | None = None) -> HomologyReport:
    """H_n = ker d_n / im d_(n+1) for 1 <= n <= up_to, with the induced alpha."""
    cx = complex_ if complex_ is not None else chain_complex(L, M, max_degree=up_to)
    F = L.field
    dims, ind, wit = {}, {}, {}
    for n in range(1, up_to + 1):
        dim_n = cx.dim(n)
        if dim_n == 0:
            dims[n], ind[n], wit[n] = 0, F.zeros((0, 0)), F.zeros((0, 0))
            continue
        dims[n], ind[n], wit[n] = _homology_at(F, cx.d(n), cx.d(n + 1), cx.alpha(n), dim_n)
    return HomologyReport(dims, ind, wit, F)


# ---------------------------------------------------------------------------
# multiplier oracle and dimension identities


@dataclass
class MultiplierResult:
    dim: int
    exterior_kernel_dim: int
    homology_dim: int
    witness: np.ndarray
    exterior_dim: int


def multiplier(L: HomLieAlgebra, ext=None) -> MultiplierResult:
    """dim H_2 computed twice: ker(L ^ L -> L) and the chain complex.  They must agree."""
    e = ext if ext is not None else exterior_square(L)
    k = e.lam.kernel
    h = homology(L, up_to=2)
    if k.dim != h.dims[2]:
        raise OracleMismatch(f"ker lambda has dim {k.dim} but H_2 has dim {h.dims[2]}")
    return MultiplierResult(k.dim, k.dim, h.dims[2], k.basis, e.dim)


def gamma_identity(L: HomLieAlgebra) -> dict:
    """dim J_2 = dim H_2 + dim Gamma(L^ab), for surjective alpha."""
    if not L.alpha_surjective:
        raise AlgebraError("needs a surjective alpha")
    t = tensor_square(L)
    j2 = t.lam.kernel.dim
    h2 = homology(L, up_to=2).dims[2]
    g = gamma(abelianization(L)[0]).dim
    return {"J2": j2, "H2": h2, "Gamma": g, "ok": j2 == h2 + g}


def direct_sum_formulas(L1: HomLieAlgebra, L2: HomLieAlgebra) -> dict:
    """Dimension identities for H_2, J_2 and Gamma of L1 + L2."""
    if not (L1.alpha_surjective and L2.alpha_surjective):
        raise AlgebraError("both summands need a surjective alpha")
    S = direct_sum(L1, L2)
    ab1 = L1.dim - L1.derived.dim
    ab2 = L2.dim - L2.derived.dim
    cross = ab1 * ab2
    h1, h2, hs = multiplier(L1).dim, multiplier(L2).dim, multiplier(S).dim
    j1, j2_, js = (tensor_square(X).lam.kernel.dim for X in (L1, L2, S))
    g1, g2, gs = (gamma(abelianization(X)[0]).dim for X in (L1, L2, S))
    checks = {
        "H2": hs == h1 + h2 + cross,
        "J2": js == j1 + j2_ + 2 * cross,
        "Gamma": gs == g1 + g2 + cross,
    }
    return {
        "ok": all(checks.values()),
        "checks": checks,
        "dims": {"H2": [h1, h2, hs], "J2": [j1, j2_, js], "Gamma": [g1, g2, gs], "ab_tensor": cross},
    }


# ---------------------------------------------------------------------------
# exact sequences


def six_term_check(K: HomLieAlgebra, M, section=None, ext: Extension | None = None) -> ExactnessReport:
    """Exactness of
    ker(M^K -> K) -> H2(K) -> H2(L) -> M/[M,K] -> H1(K) -> H1(L) -> 0
    with H2 and H1 in their exterior-product models; for split extensions
    also that the first map is injective and the second surjective.
    """
    ext = ext or build_extension(K, M, section)
    F = K.field
    rep = ExactnessReport()
    MK, KK, LL = ext.MK, ext.KK, ext.LL
    m_dim = ext.M.dim
    t1 = MK.lam.kernel
    h2K = KK.lam.kernel
    h2L = LL.lam.kernel
    f1 = restrict(F, ext.iota, t1, h2K)
    f2 = restrict(F, ext.pi, h2K, h2L)
    # M / [M, K] where [M, K] is the image of lambda_M on M ^ K, in M coordinates
    lamM_img = ext.MK.lam_M.image
    qM = lamM_img.quotient_matrix()
    # connecting map: lift along pi, apply lambda_K, read off in M, reduce
    if h2L.dim:
        lifts = solve(ext.pi, h2L.basis.T, F) if KK.dim else F.zeros((0, h2L.dim))
        vals = F.matmul(KK.lam.matrix, lifts) if KK.dim else F.zeros((K.dim, h2L.dim))
        in_m = solve(ext.inclusion.matrix, vals, F) if m_dim else F.zeros((0, h2L.dim))
        delta = F.matmul(qM, in_m) if qM.shape[0] else F.zeros((0, h2L.dim))
    else:
        delta = F.zeros((qM.shape[0], 0))
    # M/[M,K] -> K/[K,K] -> L/[L,L]
    qK = K.derived.quotient_matrix()
    f4 = F.matmul(qK, F.matmul(ext.inclusion.matrix, lamM_img.lift_matrix())) if qM.shape[0] else F.zeros((qK.shape[0], 0))
    qL = ext.L.derived.quotient_matrix()
    f5 = F.matmul(qL, F.matmul(ext.projection.matrix, K.derived.lift_matrix()))
    terms = [t1.dim, h2K.dim, h2L.dim, qM.shape[0], qK.shape[0], qL.shape[0]]
    maps = [f1, f2, delta, f4, f5]
    names = ["ker(M^K->K)", "H2(K)", "H2(L)", "M/[M,K]", "H1(K)", "H1(L)"]
    rep.dims.update(dict(zip(names, terms)))
    for k in range(1, 5):
        im = image_of(F, maps[k - 1], terms[k])
        ker = kernel_of(F, maps[k], terms[k])
        rep.checks[f"exact_at_{names[k]}"] = im == ker
    rep.checks["H1_surjective"] = image_of(F, f5, terms[5]).dim == terms[5]
    rep.checks["H2_models_agree"] = (
        homology(K, up_to=2).dims[2] == terms[1] and homology(ext.L, up_to=2).dims[2] == terms[2]
    )
    if ext.section is not None:
        rep.checks["split_first_injective"] = kernel_of(F, f1, terms[0]).dim == 0
        rep.checks["split_H2_surjective"] = image_of(F, f2, terms[2]).dim == terms[2]
    return rep


