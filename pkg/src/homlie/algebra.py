"""Finite-dimensional Hom-Lie algebras given by structure constants.

An algebra on the basis e_0, ..., e_{n-1} is stored as a full skew tensor
``table`` with ``table[i, j, k]`` the coefficient of e_k in [e_i, e_j],
and a matrix ``alpha`` whose column i holds the coordinates of alpha(e_i).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations

import numpy as np

from .exactlin import QQ, Field, Subspace, greatest_backward_invariant, nullspace, rank


class AlgebraError(ValueError):
    """Raised when data does not define what it is supposed to define."""


@dataclass
class AxiomReport:
    skew: list = dc_field(default_factory=list)
    jacobi: list = dc_field(default_factory=list)
    multiplicativity: list = dc_field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.skew or self.jacobi or self.multiplicativity)

    def to_json(self):
        return {
            "valid": self.valid,
            "skew_violations": [list(t) for t in self.skew],
            "hom_jacobi_violations": [list(t) for t in self.jacobi],
            "multiplicativity_violations": [list(t) for t in self.multiplicativity],
        }


class HomLieAlgebra:
    """Structure constants plus the twisting endomorphism alpha."""

    def __init__(self, field: Field, table, alpha, basis_names=None, name: str = ""):
        table = table if isinstance(table, np.ndarray) else field.array(table)
        alpha = alpha if isinstance(alpha, np.ndarray) else field.array(alpha)
        n = alpha.shape[0] if alpha.ndim == 2 else 0
        if table.size == 0:
            table = field.zeros((n, n, n))
        if table.shape != (n, n, n) or alpha.shape != (n, n):
            raise AlgebraError(f"inconsistent shapes {table.shape} and {alpha.shape}")
        table = np.array(table, dtype=field.dtype)
        alpha = np.array(alpha, dtype=field.dtype)
        table.setflags(write=False)
        alpha.setflags(write=False)
        self.field = field
        self.table = table
        self.alpha = alpha
        if basis_names is None:
            basis_names = [f"e{i + 1}" for i in range(n)]
        if len(basis_names) != n:
            raise AlgebraError("wrong number of basis names")
        self.basis_names = tuple(str(b) for b in basis_names)
        self.name = name

    # constructors -----------------------------------------------------
    @classmethod
    def from_brackets(cls, field: Field, dim: int, brackets, alpha=None, basis_names=None, name=""):
        """Build from ``{(i, j): vector}`` with i < j; other pairs follow by skewness."""
        table = field.zeros((dim, dim, dim))
        for (i, j), vec in dict(brackets).items():
            if not 0 <= i < j < dim:
                raise AlgebraError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < {dim}")
            v = vec if isinstance(vec, np.ndarray) else field.array(vec)
            if v.shape != (dim,):
                raise AlgebraError(f"bracket value for ({i}, {j}) has wrong length")
            table[i, j] = v
            table[j, i] = field.neg(v)
        if alpha is None:
            alpha = field.eye(dim)
        return cls(field, table, alpha, basis_names, name)

    # basic data -------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.alpha.shape[0]

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<HomLieAlgebra{label} dim={self.dim} over {self.field!r}>"

    def __eq__(self, other):
        if not isinstance(other, HomLieAlgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.dim == other.dim
            and bool(np.all(self.table == other.table))
            and bool(np.all(self.alpha == other.alpha))
        )

    def __hash__(self):
        return hash((self.dim, tuple(str(x) for x in self.table.flat), tuple(str(x) for x in self.alpha.flat)))

    def upper_brackets(self) -> dict:
        """Nonzero brackets [e_i, e_j] for i < j."""
        out = {}
        for i, j in combinations(range(self.dim), 2):
            v = self.table[i, j]
            if np.any(v != 0):
                out[(i, j)] = v
        return out

    def vector(self, coords):
        return self.field.array(coords)

    def bracket(self, u, v):
        F = self.field
        return F.einsum("i,j,ijk->k", F.array(u) if not isinstance(u, np.ndarray) else u,
                        F.array(v) if not isinstance(v, np.ndarray) else v, self.table)

    def apply_alpha(self, v):
        return self.field.matmul(self.alpha, v)

    def ad_rows(self):
        """Matrix of x -> ([x, e_0], ..., [x, e_{n-1}]) stacked into F^{n*n}."""
        n = self.dim
        return self.table.transpose(1, 2, 0).reshape(n * n, n)

    # cached invariants ------------------------------------------------
    @cached_property
    def derived(self) -> Subspace:
        n = self.dim
        return Subspace.span(self.field, self.table.reshape(n * n, n), n)

    @cached_property
    def center(self) -> Subspace:
        return nullspace(self.ad_rows(), self.field) if self.dim else Subspace.zero(self.field, 0)

    @cached_property
    def alpha_center(self) -> Subspace:
        return greatest_backward_invariant(self.center, self.alpha)

    @cached_property
    def alpha_rank(self) -> int:
        return rank(self.alpha, self.field)

    @property
    def is_abelian(self) -> bool:
        return self.field.is_zero(self.table)

    @property
    def is_perfect(self) -> bool:
        return self.derived.dim == self.dim

    @property
    def alpha_surjective(self) -> bool:
        return self.alpha_rank == self.dim

    @property
    def alpha_is_zero(self) -> bool:
        return self.field.is_zero(self.alpha)

    @property
    def alpha_is_identity(self) -> bool:
        return self.field.equal(self.alpha, self.field.eye(self.dim))

    @cached_property
    def alpha_nilpotent(self) -> bool:
        F = self.field
        p = F.eye(self.dim)
        for _ in range(self.dim):
            p = F.matmul(self.alpha, p)
        return F.is_zero(p)


def validate(L: HomLieAlgebra) -> AxiomReport:
    """Check skewness, the Hom-Jacobi identity and multiplicativity on basis elements."""
    F = L.field
    n = L.dim
    C = L.table
    A = L.alpha
    report = AxiomReport()
    if n == 0:
        return report
    sym = F.add(C, C.transpose(1, 0, 2))
    diag = C[np.arange(n), np.arange(n)]
    for i, j in combinations(range(n), 2):
        if np.any(sym[i, j] != 0):
            report.skew.append((i, j))
    for i in range(n):
        if np.any(diag[i] != 0):
            report.skew.append((i, i))
    # T[x, y, z] = [alpha e_x, [e_y, e_z]]; the cyclic sum must vanish
    ad_alpha = F.einsum_scaled("px,pqk->xqk", A, C)
    T = F.einsum_scaled("yzq,xqk->xyzk", C, ad_alpha)
    if T.dtype == np.int64 and T.size and np.max(np.abs(T)) > 2**60:
        T = T.astype(object)
    J = T + T.transpose(2, 0, 1, 3) + T.transpose(1, 2, 0, 3)
    if F.characteristic:
        J = J % F.characteristic
    bad = np.any(J != 0, axis=3)
    for x, y, z in combinations(range(n), 3):
        if bad[x, y, z]:
            report.jacobi.append((x, y, z))
    lhs = F.einsum("ijq,kq->ijk", C, A)
    rhs = F.einsum("pi,pqk->iqk", A, C)
    rhs = F.einsum("qj,iqk->ijk", A, rhs)
    diff = np.any(F.sub(lhs, rhs) != 0, axis=2)
    for i, j in combinations(range(n), 2):
        if diff[i, j]:
            report.multiplicativity.append((i, j))
    return report


def axiom_defects(L: HomLieAlgebra) -> np.ndarray:
    """Rows spanning the failures of the axioms: [x, y] + [y, x], the cyclic
    Hom-Jacobi sums and alpha[x, y] - [alpha x, alpha y] over basis elements.

    The rows are exact up to a common nonzero scalar per block, so their span
    is what matters.  A valid algebra gives an empty array.
    """
    F = L.field
    n = L.dim
    C = L.table
    if n == 0:
        return F.zeros((0, 0))
    blocks = [F.add(C, C.transpose(1, 0, 2)).reshape(-1, n)]
    # the cyclic sums only matter up to span, so a common scale is harmless
    ad_alpha = F.einsum_scaled("px,pqk->xqk", L.alpha, C)
    T = F.einsum_scaled("yzq,xqk->xyzk", C, ad_alpha)
    if T.dtype == np.int64 and T.size and np.max(np.abs(T)) > 2**60:
        T = T.astype(object)
    J = (T + T.transpose(2, 0, 1, 3) + T.transpose(1, 2, 0, 3)).reshape(-1, n)
    if F.characteristic:
        J = J % F.characteristic
    J = J[np.any(J != 0, axis=1)]
    if J.shape[0]:
        blocks.append(F.array(np.unique(J, axis=0) if J.dtype != object else J))
    lhs = F.einsum("ijq,kq->ijk", C, L.alpha)
    rhs = F.einsum("qj,iqk->ijk", L.alpha, F.einsum("pi,pqk->iqk", L.alpha, C))
    blocks.append(F.sub(lhs, rhs).reshape(-1, n))
    rows = np.concatenate(blocks)
    keep = np.any(rows != 0, axis=1)
    return rows[keep]


def ensure_valid(L: HomLieAlgebra, what: str = "algebra") -> HomLieAlgebra:
    rep = validate(L)
    if not rep.valid:
        raise AlgebraError(f"{what} fails the Hom-Lie axioms: {rep.to_json()}")
    return L


# ---------------------------------------------------------------------------
# ideals and morphisms


class Ideal:
    """An alpha-invariant ideal of ``parent``."""

    def __init__(self, parent: HomLieAlgebra, space: Subspace, check: bool = True):
        if space.ambient_dim != parent.dim or space.field != parent.field:
            raise AlgebraError("subspace does not live in the parent algebra")
        self.parent = parent
        self.space = space
        if check:
            problem = ideal_defect(parent, space)
            if problem:
                raise AlgebraError(problem)

    @classmethod
    def span(cls, parent: HomLieAlgebra, vectors, check: bool = True) -> "Ideal":
        return cls(parent, Subspace.span(parent.field, vectors, parent.dim), check)

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self):
        return f"Ideal(dim={self.dim} in {self.parent!r})"


def ideal_defect(L: HomLieAlgebra, space: Subspace) -> str | None:
    """None if space is an alpha-invariant ideal, else a description of the failure."""
    F = L.field
    if space.dim == 0:
        return None
    if not space.contains(F.matmul(space.basis, L.alpha.T)):
        return "subspace is not alpha-invariant"
    br = F.einsum("si,ijk->sjk", space.basis, L.table).reshape(-1, L.dim)
    if not space.contains(br):
        return "subspace is not an ideal"
    return None


def as_subspace(x, L: HomLieAlgebra | None = None) -> Subspace:
    if isinstance(x, Ideal):
        return x.space
    if isinstance(x, Subspace):
        return x
    if isinstance(x, HomLieAlgebra):
        return Subspace.full(x.field, x.dim)
    if L is None:
        raise TypeError("cannot interpret as a subspace")
    return Subspace.span(L.field, x, L.dim)


def commutator(H, K, parent: HomLieAlgebra | None = None) -> Ideal:
    """[H, K] for ideals H, K of one algebra.

    The result is alpha-invariant and an ideal of H and of K.  It is an
    ideal of the parent when H or K is the whole algebra with surjective
    alpha, or when it happens to be; it is returned unchecked otherwise,
    since for non-surjective alpha the Hom-Jacobi identity only controls
    brackets with Im(alpha).
    """
    if isinstance(H, Ideal) and isinstance(K, Ideal) and H.parent is not K.parent:
        if H.parent != K.parent:
            raise AlgebraError("ideals of different algebras")
    L = parent
    for x in (H, K):
        if isinstance(x, Ideal):
            L = L or x.parent
        elif isinstance(x, HomLieAlgebra):
            L = L or x
    if L is None:
        raise TypeError("cannot determine the parent algebra")
    h = as_subspace(H, L)
    k = as_subspace(K, L)
    F = L.field
    if h.dim == 0 or k.dim == 0:
        return Ideal(L, Subspace.zero(F, L.dim), check=False)
    vals = F.einsum("si,tj,ijk->stk", h.basis, k.basis, L.table).reshape(-1, L.dim)
    return Ideal(L, Subspace.span(F, vals, L.dim), check=False)


def derived_ideal(L: HomLieAlgebra) -> Ideal:
    return Ideal(L, L.derived, check=False)


def center(L: HomLieAlgebra) -> Subspace:
    return L.center


def alpha_center(L: HomLieAlgebra) -> Ideal:
    return Ideal(L, L.alpha_center, check=False)


class Morphism:
    """A linear map between Hom-Lie algebras, checked to be a homomorphism."""

    def __init__(self, source: HomLieAlgebra, target: HomLieAlgebra, matrix, check: bool = True):
        F = source.field
        if target.field != F:
            raise AlgebraError("field mismatch")
        m = matrix if isinstance(matrix, np.ndarray) else F.array(matrix)
        if m.size == 0:
            m = F.zeros((target.dim, source.dim))
        if m.shape != (target.dim, source.dim):
            raise AlgebraError(f"matrix shape {m.shape} does not match {target.dim}x{source.dim}")
        m = np.array(m, dtype=F.dtype)
        m.setflags(write=False)
        self.source = source
        self.target = target
        self.matrix = m
        if check:
            problem = self.defect()
            if problem:
                raise AlgebraError(problem)

    def defect(self) -> str | None:
        F = self.source.field
        f = self.matrix
        if not F.equal(F.matmul(f, self.source.alpha), F.matmul(self.target.alpha, f)):
            return "map does not commute with alpha"
        if self.source.dim and self.target.dim:
            lhs = F.einsum("ijq,kq->ijk", self.source.table, f)
            rhs = F.einsum("pi,pqk->iqk", f, self.target.table)
            rhs = F.einsum("qj,iqk->ijk", f, rhs)
            if not F.equal(lhs, rhs):
                return "map does not preserve brackets"
        return None

    def __call__(self, v):
        return self.source.field.matmul(self.matrix, v)

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other."""
        F = self.source.field
        return Morphism(other.source, self.target, F.matmul(self.matrix, other.matrix), check=False)

    @cached_property
    def kernel(self) -> Subspace:
        return nullspace(self.matrix, self.source.field) if self.source.dim else Subspace.zero(self.source.field, 0)

    @cached_property
    def image(self) -> Subspace:
        return Subspace.full(self.source.field, self.source.dim).image(self.matrix)

    @property
    def rank(self) -> int:
        return self.image.dim

    @property
    def injective(self) -> bool:
        return self.kernel.dim == 0

    @property
    def surjective(self) -> bool:
        return self.image.dim == self.target.dim

    def __repr__(self):
        return f"Morphism({self.source.dim} -> {self.target.dim})"


# ---------------------------------------------------------------------------
# constructions


def quotient(L: HomLieAlgebra, I) -> tuple[HomLieAlgebra, Morphism]:
    """L / I on the complement basis of I's pivot columns, with the projection."""
    space = as_subspace(I, L)
    problem = ideal_defect(L, space)
    if problem:
        raise AlgebraError(f"cannot form quotient: {problem}")
    F = L.field
    if space.dim == 0:
        return L, Morphism(L, L, F.eye(L.dim), check=False)
    q = space.quotient_matrix()
    comp = list(space.complement_indices())
    sub = L.table[np.ix_(comp, comp)]
    table = F.einsum("abk,qk->abq", sub, q) if comp else F.zeros((0, 0, 0))
    alpha = F.matmul(q, L.alpha[:, comp]) if comp else F.zeros((0, 0))
    names = [L.basis_names[i] for i in comp]
    Q = HomLieAlgebra(F, table, alpha, names, name=f"{L.name}/I" if L.name else "")
    return Q, Morphism(L, Q, q, check=False)


def subalgebra(L: HomLieAlgebra, space) -> tuple[HomLieAlgebra, Morphism]:
    """An alpha-invariant subalgebra as an algebra on its RREF basis, with the inclusion."""
    S = as_subspace(space, L)
    F = L.field
    B = S.basis
    piv = list(S.pivots)
    if S.dim and not S.contains(F.matmul(B, L.alpha.T)):
        raise AlgebraError("subspace is not alpha-invariant")
    br = F.einsum("si,tj,ijk->stk", B, B, L.table) if S.dim else F.zeros((0, 0, L.dim))
    if S.dim and not S.contains(br.reshape(-1, L.dim)):
        raise AlgebraError("subspace is not closed under the bracket")
    table = br[:, :, piv] if S.dim else F.zeros((0, 0, 0))
    alpha = F.matmul(B, L.alpha.T)[:, piv].T if S.dim else F.zeros((0, 0))
    names = []
    for row in B:
        nz = [i for i in range(L.dim) if row[i] != 0]
        names.append(L.basis_names[nz[0]] if len(nz) == 1 else "+".join(L.basis_names[i] for i in nz))
    M = HomLieAlgebra(F, table, np.array(alpha, dtype=F.dtype), names)
    return M, Morphism(M, L, B.T.copy(), check=False)


def direct_sum(L1: HomLieAlgebra, L2: HomLieAlgebra) -> HomLieAlgebra:
    if L1.field != L2.field:
        raise AlgebraError("field mismatch")
    F = L1.field
    n1, n2 = L1.dim, L2.dim
    n = n1 + n2
    table = F.zeros((n, n, n))
    table[:n1, :n1, :n1] = L1.table
    table[n1:, n1:, n1:] = L2.table
    alpha = F.zeros((n, n))
    alpha[:n1, :n1] = L1.alpha
    alpha[n1:, n1:] = L2.alpha
    names = list(L1.basis_names) + list(L2.basis_names)
    if len(set(names)) < len(names):
        names = [f"{b}" for b in L1.basis_names] + [f"{b}'" for b in L2.basis_names]
    label = f"{L1.name}+{L2.name}" if L1.name and L2.name else ""
    return HomLieAlgebra(F, table, alpha, names, name=label)


def inclusion_maps(L1: HomLieAlgebra, L2: HomLieAlgebra, S: HomLieAlgebra):
    F = L1.field
    n1, n2 = L1.dim, L2.dim
    i1 = F.zeros((n1 + n2, n1))
    i1[np.arange(n1), np.arange(n1)] = F.one
    i2 = F.zeros((n1 + n2, n2))
    i2[n1 + np.arange(n2), np.arange(n2)] = F.one
    return Morphism(L1, S, i1, check=False), Morphism(L2, S, i2, check=False)


def abelianization(L: HomLieAlgebra) -> tuple[HomLieAlgebra, Morphism]:
    return quotient(L, L.derived)


def yau_twist(L: HomLieAlgebra, phi) -> HomLieAlgebra:
    """(L, phi o [,], phi) for an endomorphism phi of the algebra L with alpha = id.

    More generally the twist of a Hom-Lie algebra by a morphism commuting
    with its alpha; the result has alpha replaced by phi o alpha.
    """
    F = L.field
    phi = phi if isinstance(phi, np.ndarray) else F.array(phi)
    Morphism(L, L, phi)  # phi must be an endomorphism
    table = F.einsum("ijq,kq->ijk", L.table, phi)
    return HomLieAlgebra(F, table, F.matmul(phi, L.alpha), L.basis_names)


# ---------------------------------------------------------------------------
# named algebras


def abelian(n: int, alpha=None, field: Field = QQ) -> HomLieAlgebra:
    if n < 0:
        raise AlgebraError("dimension must be non-negative")
    a = field.eye(n) if alpha is None else field.array(alpha)
    return HomLieAlgebra(field, field.zeros((n, n, n)), a, name=f"ab{n}")


def heisenberg(m: int, alpha=None, field: Field = QQ) -> HomLieAlgebra:
    """Basis x1..xm, y1..ym, z with [x_i, y_i] = z."""
    if m < 1:
        raise AlgebraError("heisenberg algebras need m >= 1")
    n = 2 * m + 1
    z = field.zeros(n)
    z[n - 1] = field.one
    brackets = {(i, m + i): z for i in range(m)}
    names = [f"x{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(m)] + ["z"]
    return HomLieAlgebra.from_brackets(field, n, brackets, alpha, names, name=f"H{m}")


def sl2(field: Field = QQ) -> HomLieAlgebra:
    """Basis e, f, h with [e, f] = h, [h, e] = 2e, [h, f] = -2f."""
    if field.characteristic == 2:
        raise AlgebraError("sl2 degenerates in characteristic 2")
    b = {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]}
    return HomLieAlgebra.from_brackets(field, 3, b, None, ["e", "f", "h"], name="sl2")


def nilpotent_alpha_example(field: Field = QQ) -> HomLieAlgebra:
    """Dim 3: [e1, e2] = e3 with alpha(e1) = e3, alpha(e2) = e2, alpha(e3) = 0."""
    alpha = field.zeros((3, 3))
    alpha[2, 0] = field.one
    alpha[1, 1] = field.one
    return HomLieAlgebra.from_brackets(field, 3, {(0, 1): [0, 0, 1]}, alpha, name="L3")


def nilpotent_alpha_cover(field: Field = QQ) -> HomLieAlgebra:
    """Dim 4: [f1, f2] = f3, [f3, f1] = f4, alpha: f1 -> f3, f2 -> f2, f3, f4 -> 0.

    Its quotient by the alpha-center is :func:`nilpotent_alpha_example`.
    """
    alpha = field.zeros((4, 4))
    alpha[2, 0] = field.one
    alpha[1, 1] = field.one
    br = {(0, 1): [0, 0, 1, 0], (0, 2): [0, 0, 0, -1]}
    return HomLieAlgebra.from_brackets(field, 4, br, alpha, ["f1", "f2", "f3", "f4"], name="K4")


def abelian_cover(L: HomLieAlgebra) -> HomLieAlgebra:
    """K = L + Lambda^2 L with [e_j, e_k] = e_jk and alpha extended by Lambda^2 alpha.

    For abelian L this K satisfies K / Z_alpha(K) = L as soon as dim L >= 2.
    """
    if not L.is_abelian:
        raise AlgebraError("abelian_cover expects an abelian algebra")
    F = L.field
    n = L.dim
    pairs = list(combinations(range(n), 2))
    N = n + len(pairs)
    table = F.zeros((N, N, N))
    for k, (i, j) in enumerate(pairs):
        table[i, j, n + k] = F.one
        table[j, i, n + k] = F.neg(F.one)
    alpha = F.zeros((N, N))
    alpha[:n, :n] = L.alpha
    A = L.alpha
    # alpha(e_i) ^ alpha(e_j) expanded in the e_kl basis
    for c, (i, j) in enumerate(pairs):
        for r, (k, l) in enumerate(pairs):
            alpha[n + r, n + c] = A[k, i] * A[l, j] - A[l, i] * A[k, j]
    alpha = F.array(alpha) if F.characteristic == 0 else alpha % F.characteristic
    names = list(L.basis_names) + [f"{L.basis_names[i]}^{L.basis_names[j]}" for i, j in pairs]
    return HomLieAlgebra(F, table, alpha, names, name=f"cover({L.name})" if L.name else "")
