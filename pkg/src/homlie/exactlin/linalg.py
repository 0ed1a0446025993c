"""Canonical subspaces and the linear-algebra operations built on RREF."""

from __future__ import annotations

import numpy as np

from .fields import QQ, Field


def rref(m, field: Field = QQ):
    """Reduced row-echelon form of ``m`` and its rank.

    The returned matrix has the shape of ``m``; zero rows come last.
    """
    m = field.array(m) if not isinstance(m, np.ndarray) else m
    if m.ndim != 2:
        raise ValueError("rref expects a matrix")
    red, piv = field.rref(m)
    out = field.zeros(m.shape)
    out[: len(piv)] = red
    return out, len(piv)


def rank(m, field: Field = QQ) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(field.rref(m)[1])


class Subspace:
    """A subspace of F^n stored as the nonzero rows of its RREF basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, basis, pivots):
        # internal; use Subspace.span or the helpers below
        basis.setflags(write=False)
        self.field = field
        self.ambient_dim = int(ambient_dim)
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: Field, vectors, ambient_dim: int | None = None) -> "Subspace":
        """Span of the rows of ``vectors``."""
        v = vectors if isinstance(vectors, np.ndarray) else field.array(vectors)
        if v.ndim == 1:
            v = v.reshape(1, -1) if v.size else v.reshape(0, ambient_dim or 0)
        if ambient_dim is None:
            ambient_dim = v.shape[1]
        if v.shape[1] != ambient_dim:
            raise ValueError(f"vectors have length {v.shape[1]}, expected {ambient_dim}")
        if v.shape[0] == 0:
            return cls.zero(field, ambient_dim)
        red, piv = field.rref(v)
        return cls(field, ambient_dim, np.array(red, dtype=field.dtype), piv)

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, field.zeros((0, n)), ())

    @classmethod
    def full(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, field.eye(n), range(n))

    # basic queries ----------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _same_ambient(self, other: "Subspace"):
        if self.field != other.field:
            raise ValueError("subspaces over different fields")
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and bool(np.all(self.basis == other.basis))
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots, tuple(str(x) for x in self.basis.flat)))

    def reduce(self, v):
        """Remainder of v (vector or rows) after elimination against the basis."""
        F = self.field
        v = v if isinstance(v, np.ndarray) else F.array(v)
        if self.dim == 0:
            return v
        if v.ndim == 1:
            return F.sub(v, F.matmul(v[list(self.pivots)], self.basis))
        return F.sub(v, F.matmul(v[:, list(self.pivots)], self.basis))

    def contains(self, v) -> bool:
        """True when every row of v (or the vector v) lies in the subspace."""
        return self.field.is_zero(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def coordinates(self, v):
        """Coordinates of v with respect to the RREF basis (v must lie inside)."""
        if not self.contains(v):
            raise ValueError("vector outside subspace")
        v = np.asarray(v)
        return v[..., list(self.pivots)]

    def __le__(self, other: "Subspace") -> bool:
        self._same_ambient(other)
        return self.dim == 0 or other.contains(self.basis)

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __add__(self, other: "Subspace") -> "Subspace":
        self._same_ambient(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.span(self.field, np.concatenate([self.basis, other.basis]), self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def complement_indices(self) -> tuple[int, ...]:
        """Coordinates not used as pivots: the lexicographically first complement."""
        piv = set(self.pivots)
        return tuple(i for i in range(self.ambient_dim) if i not in piv)

    def quotient_matrix(self):
        """Matrix of F^n -> F^n / S in the coordinates of the complement indices."""
        F = self.field
        comp = list(self.complement_indices())
        q = F.zeros((len(comp), self.ambient_dim))
        q[np.arange(len(comp)), comp] = F.one
        if self.dim and comp:
            # v - sum_i v[p_i] b_i restricted to the complement coordinates
            q[:, list(self.pivots)] = F.neg(self.basis[:, comp].T)
        return q

    def lift_matrix(self):
        """Columns: the complement coordinate vectors (a section of the quotient map)."""
        F = self.field
        comp = list(self.complement_indices())
        s = F.zeros((self.ambient_dim, len(comp)))
        s[comp, np.arange(len(comp))] = F.one
        return s

    def image(self, f) -> "Subspace":
        """Image of the subspace under the matrix f."""
        f = np.asarray(f)
        if f.shape[1] != self.ambient_dim:
            raise ValueError("shape mismatch")
        if self.dim == 0:
            return Subspace.zero(self.field, f.shape[0])
        return Subspace.span(self.field, self.field.matmul(self.basis, f.T), f.shape[0])

    def annihilator(self) -> "Subspace":
        """Linear functionals (as rows) vanishing on the subspace."""
        return nullspace(self.basis, self.field) if self.dim else Subspace.full(
            self.field, self.ambient_dim
        )

    def to_json(self):
        F = self.field
        return [[F.to_json(x) for x in row] for row in self.basis]


def column_space(m, field: Field = QQ) -> Subspace:
    m = np.asarray(m)
    return Subspace.span(field, m.T, m.shape[0])


def nullspace(m, field: Field = QQ) -> Subspace:
    """Kernel {v : m v = 0} as a subspace of the column-index space."""
    m = m if isinstance(m, np.ndarray) else field.array(m)
    if m.ndim != 2:
        raise ValueError("nullspace expects a matrix")
    n = m.shape[1]
    if m.shape[0] == 0:
        return Subspace.full(field, n)
    red, piv = field.rref(m)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    if not free:
        return Subspace.zero(field, n)
    basis = field.zeros((len(free), n))
    for k, j in enumerate(free):
        basis[k, j] = field.one
        if piv:
            basis[k, list(piv)] = field.neg(red[:, j])
    return Subspace.span(field, basis, n)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus intersection of two subspaces."""
    a._same_ambient(b)
    F = a.field
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(F, n)
    if a.is_full():
        return b
    if b.is_full():
        return a
    top = np.concatenate([a.basis, a.basis], axis=1)
    bottom = np.concatenate([b.basis, F.zeros((b.dim, n))], axis=1)
    red, piv = F.rref(np.concatenate([top, bottom]))
    rows = [i for i, c in enumerate(piv) if c >= n]
    if not rows:
        return Subspace.zero(F, n)
    return Subspace.span(F, red[rows, n:], n)


def preimage(f, t: Subspace) -> Subspace:
    """{x : f x in t}."""
    F = t.field
    f = f if isinstance(f, np.ndarray) else F.array(f)
    if f.ndim != 2 or f.shape[0] != t.ambient_dim:
        raise ValueError(f"map of shape {f.shape} does not land in F^{t.ambient_dim}")
    if t.is_full():
        return Subspace.full(F, f.shape[1])
    ann = t.annihilator()
    return nullspace(F.matmul(ann.basis, f), F)


def greatest_backward_invariant(t: Subspace, a) -> Subspace:
    """Largest W inside t with a(W) inside W."""
    F = t.field
    a = a if isinstance(a, np.ndarray) else F.array(a)
    n = t.ambient_dim
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix of side {n}, got {a.shape}")
    w = t
    for _ in range(n + 1):
        nxt = intersect(t, preimage(a, w))
        if nxt.dim == w.dim:
            return w
        w = nxt
    raise RuntimeError("backward-invariant iteration did not stabilise")  # pragma: no cover


def solve(a, b, field: Field = QQ):
    """A particular solution X of a X = b (b a vector or a matrix).

    Raises ValueError when the system is inconsistent.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    n = a.shape[1]
    if a.shape[0] == 0:
        if not field.is_zero(b):
            raise ValueError("inconsistent system")
        x = field.zeros((n, b.shape[1]))
        return x[:, 0] if vec else x
    red, piv = field.rref(np.concatenate([a, b], axis=1))
    if any(c >= n for c in piv):
        raise ValueError("inconsistent system")
    x = field.zeros((n, b.shape[1]))
    for i, c in enumerate(piv):
        x[c] = red[i, n:]
    return x[:, 0] if vec else x


def inverse(a, field: Field = QQ):
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("not square")
    red, piv = field.rref(np.concatenate([a, field.eye(n)], axis=1))
    if piv != tuple(range(n)):
        raise ValueError("matrix is singular")
    return red[:, n:]
