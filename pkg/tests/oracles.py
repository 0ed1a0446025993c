"""Independent reference computations used to freeze derived values.

Everything here works on plain Python Fractions or sympy matrices and
shares no code with the package beyond reading structure constants.
"""

from fractions import Fraction
from itertools import combinations, product

import sympy


def to_fraction(F, x):
    return Fraction(str(F.to_json(x))) if F.characteristic == 0 else Fraction(int(x))


def frac_matrix(F, m):
    return [[to_fraction(F, x) for x in row] for row in m]


def sympy_rank(rows, p=None):
    if not rows or not rows[0]:
        return 0
    if p is None:
        return sympy.Matrix(rows).rank()
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.domains import GF

    dom = GF(p)
    dm = DomainMatrix([[dom(int(x) % p) for x in r] for r in rows], (len(rows), len(rows[0])), dom)
    return dm.rank()


def sympy_rref(rows):
    red, piv = sympy.Matrix(rows).rref()
    k = len(piv)
    return [[Fraction(int(x.p), int(x.q)) for x in red.row(i)] for i in range(k)], tuple(piv)


def structure(L):
    """table[i][j] = coordinates of [e_i, e_j]; alpha[k][i] = coefficient of e_k in alpha(e_i)."""
    F = L.field
    n = L.dim
    table = [[[to_fraction(F, L.table[i, j, k]) for k in range(n)] for j in range(n)] for i in range(n)]
    alpha = frac_matrix(F, L.alpha)
    return table, alpha


def _sort_sign(idx):
    if len(set(idx)) < len(idx):
        return 0, None
    sign = 1
    idx = list(idx)
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def _wedge(vectors, n):
    """Coordinates of v_1 ^ ... ^ v_k in the lexicographic basis of Lambda^k."""
    out = {}
    supports = [[(i, c) for i, c in enumerate(v) if c] for v in vectors]
    for choice in product(*supports):
        idx = [i for i, _ in choice]
        sign, key = _sort_sign(idx)
        if not sign:
            continue
        coeff = Fraction(sign)
        for _, c in choice:
            coeff *= c
        out[key] = out.get(key, 0) + coeff
    return out


def boundary_matrix(L, k):
    """d_k for trivial coefficients, sign convention irrelevant for ranks."""
    table, alpha = structure(L)
    n = L.dim
    src = list(combinations(range(n), k))
    tgt = {J: r for r, J in enumerate(combinations(range(n), k - 1))}
    cols = []
    a_of = [[alpha[r][i] for r in range(n)] for i in range(n)]
    for J in src:
        col = [Fraction(0)] * len(tgt)
        for r, s in combinations(range(k), 2):
            br = table[J[r]][J[s]]
            rest = [a_of[J[t]] for t in range(k) if t not in (r, s)]
            sgn = (-1) ** (r + s)
            for key, c in _wedge([br] + rest, n).items():
                col[tgt[key]] += sgn * c
        cols.append(col)
    return [[cols[c][r] for c in range(len(src))] for r in range(len(tgt))]


def homology_dims(L, up_to=2):
    n = L.dim
    ranks = {}
    for k in range(1, up_to + 2):
        if k > n:
            ranks[k] = 0
            continue
        m = boundary_matrix(L, k)
        p = L.field.characteristic or None
        ranks[k] = sympy_rank([[int(x) for x in r] for r in m], p) if p else sympy_rank(m)
    from math import comb

    return {k: comb(n, k) - ranks[k] - ranks[k + 1] for k in range(1, up_to + 1)}


def backward_invariant(F, t_rows, a, n):
    """Intersection of the preimages a^-k(t) for k = 0..n, as an RREF row list."""
    rows = frac_matrix(F, t_rows) if len(t_rows) else []
    A = sympy.Matrix(frac_matrix(F, a))
    if not rows:
        return []
    T = sympy.Matrix(rows)
    ann = T.nullspace()  # the row space is the annihilator of these
    ann_rows = [list(v.T) for v in ann]
    constraints = []
    P = sympy.eye(n)
    for _ in range(n + 1):
        for y in ann_rows:
            constraints.append(list(sympy.Matrix([y]) * P))
        P = A * P
    if not constraints:
        return [list(r) for r in sympy.eye(n).tolist()]
    basis = sympy.Matrix(constraints).nullspace()
    if not basis:
        return []
    red, _ = sympy.Matrix.hstack(*basis).T.rref()
    return [[Fraction(int(x.p), int(x.q)) for x in red.row(i)] for i in range(red.rows) if any(red.row(i))]
