"""Exact scalar fields: the rationals and prime fields.

Matrices are plain numpy arrays.  Over the rationals they have object
dtype holding ``gmpy2.mpq`` values; over F_p they are int64 arrays with
entries reduced to ``[0, p)``.  All arithmetic goes through the field
object so that reductions mod p are never forgotten.
"""

from __future__ import annotations

import operator
import re
from functools import lru_cache, reduce
from itertools import count

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from ._kernels import rref_mod_p

_INT64_SAFE = 2**62

_num = np.frompyfunc(operator.attrgetter("numerator"), 1, 1)
_den = np.frompyfunc(operator.attrgetter("denominator"), 1, 1)
_to_mpq = np.frompyfunc(mpq, 1, 1)
_RATIONAL_RE = re.compile(r"^\s*[-+]?\d+(\s*/\s*\d+)?\s*$")


class Field:
    """Common interface; see :class:`Rationals` and :class:`PrimeField`."""

    characteristic: int
    dtype: object

    # construction -----------------------------------------------------
    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        idx = np.arange(n)
        out[idx, idx] = self.one
        return out

    def scalar(self, x):
        return self.array([x])[0]

    # arithmetic -------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def matmul(self, a, b):
        raise NotImplementedError

    def einsum(self, subscripts: str, *operands):
        raise NotImplementedError

    def einsum_scaled(self, subscripts: str, *operands):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def kron(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.mul(a[:, None, :, None], b[None, :, None, :])
        return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])

    def is_zero(self, a) -> bool:
        return not np.any(np.asarray(a) != 0)

    def equal(self, a, b) -> bool:
        a = np.asarray(a)
        b = np.asarray(b)
        return a.shape == b.shape and bool(np.all(a == b))

    # elimination ------------------------------------------------------
    def rref(self, a):  # pragma: no cover - abstract
        """Return ``(R, pivots)`` with R the nonzero rows of the RREF."""
        raise NotImplementedError

    # serialisation ----------------------------------------------------
    def to_json(self, x):
        raise NotImplementedError

    def field_json(self):
        raise NotImplementedError


def _summed_size(subscripts: str, operands) -> int:
    lhs, _, rhs = subscripts.replace(" ", "").partition("->")
    sizes: dict[str, int] = {}
    for term, op in zip(lhs.split(","), operands):
        for ch, n in zip(term, np.shape(op)):
            sizes[ch] = n
    total = 1
    for ch, n in sizes.items():
        if ch not in rhs:
            total *= n
    return total


class Rationals(Field):
    """The field of rational numbers with ``gmpy2.mpq`` entries."""

    characteristic = 0
    dtype = object
    zero = mpq(0)
    one = mpq(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def _parse(self, x):
        if isinstance(x, type(self.zero)):
            return x
        if isinstance(x, str):
            if not _RATIONAL_RE.match(x):
                raise ValueError(f"not a rational literal: {x!r}")
            return mpq(x.replace(" ", ""))
        if isinstance(x, (bool, np.bool_)):
            raise TypeError("booleans are not field elements")
        if isinstance(x, (float, np.floating)):
            raise TypeError("floats are not exact field elements")
        if isinstance(x, np.integer):
            return mpq(int(x))
        return mpq(x)

    def array(self, data):
        arr = np.asarray(data, dtype=object)
        if arr.size == 0:
            return np.empty(arr.shape, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        flat = out.reshape(-1)
        for k, x in enumerate(arr.reshape(-1)):
            flat[k] = self._parse(x)
        return out

    def zeros(self, shape):
        return np.full(shape, self.zero, dtype=object)

    def add(self, a, b):
        return np.add(a, b, dtype=object)

    def sub(self, a, b):
        return np.subtract(a, b, dtype=object)

    def neg(self, a):
        return np.negative(a, dtype=object)

    def mul(self, a, b):
        return np.multiply(a, b, dtype=object)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / mpq(x)

    @staticmethod
    def integerize(a):
        """Split ``a`` as ``(N, d)`` with N integral and a = N / d.

        N is int64 when its entries are small enough, otherwise an object
        array of ``mpz``.
        """
        a = np.asarray(a)
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64), mpz(1)
        if a.dtype.kind in "iu":
            return a.astype(np.int64), mpz(1)
        a = a.astype(object)
        d = reduce(gmpy2.lcm, set(_den(a).flat), mpz(1))
        n = _num(a * d) if d != 1 else _num(a)
        big = np.max(np.abs(n))
        if big < _INT64_SAFE:
            return n.astype(np.int64), mpz(d)
        return n, mpz(d)

    @staticmethod
    def _from_integer(n, d):
        n = np.asarray(n, dtype=object)
        if n.size == 0:
            return n
        if d == 1:
            return np.asarray(_to_mpq(n), dtype=object)
        return np.asarray(np.frompyfunc(lambda v: mpq(v, d), 1, 1)(n), dtype=object)

    def _contract_scaled(self, fn, operands, summed):
        parts = [self.integerize(op) for op in operands]
        bound = summed
        denom = mpz(1)
        for n, d in parts:
            m = int(np.max(np.abs(n))) if n.size else 0
            bound *= m
            denom *= d
        if bound < _INT64_SAFE and all(n.dtype == np.int64 for n, _ in parts):
            res = fn(*[n for n, _ in parts])
        else:
            res = fn(*[n.astype(object) for n, _ in parts])
        return res, denom

    def _contract(self, fn, operands, summed):
        res, denom = self._contract_scaled(fn, operands, summed)
        return self._from_integer(res, denom)

    def matmul(self, a, b):
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        if a.shape[-1] == 0:
            return self.zeros(np.broadcast_shapes(a.shape[:-1], ()) + b.shape[1:])
        if a.size * (b.shape[-1] if b.ndim > 1 else 1) <= 512:
            return a @ b
        inner = a.shape[-1]
        return self._contract(np.matmul, (a, b), inner)

    def einsum(self, subscripts, *operands):
        ops = [np.asarray(o) for o in operands]
        summed = _summed_size(subscripts, ops)
        return self._contract(lambda *xs: np.einsum(subscripts, *xs, optimize=len(xs) > 2), ops, summed)

    def einsum_scaled(self, subscripts, *operands):
        """An integer array equal to the einsum up to a positive scalar."""
        ops = [np.asarray(o) for o in operands]
        summed = _summed_size(subscripts, ops)
        return self._contract_scaled(lambda *xs: np.einsum(subscripts, *xs, optimize=len(xs) > 2), ops, summed)[0]

    def rref(self, a):
        return _rref_rational(np.asarray(a, dtype=object))

    def to_json(self, x):
        x = mpq(x)
        if x.denominator == 1:
            return f"{x.numerator}/1"
        return f"{x.numerator}/{x.denominator}"

    def field_json(self):
        return "rational"


class PrimeField(Field):
    """The prime field F_p, p < 2**31 (the CLI accepts p < 2**16)."""

    dtype = np.int64

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2**31:
            raise ValueError("prime too large")
        self.p = p
        self.characteristic = p
        self.zero = np.int64(0)
        self.one = np.int64(1)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def _parse(self, x):
        if isinstance(x, (bool, np.bool_)):
            raise TypeError("booleans are not field elements")
        if isinstance(x, float):
            raise TypeError("floats are not exact field elements")
        if isinstance(x, str):
            if not _RATIONAL_RE.match(x):
                raise ValueError(f"not a field literal: {x!r}")
            x = mpq(x.replace(" ", ""))
        if isinstance(x, type(mpq(0))):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def array(self, data):
        arr = np.asarray(data)
        if arr.dtype.kind in "iu":
            return (arr.astype(np.int64) % self.p).astype(np.int64)
        arr = np.asarray(data, dtype=object)
        out = np.empty(arr.shape, dtype=np.int64)
        flat = out.reshape(-1)
        for k, x in enumerate(arr.reshape(-1)):
            flat[k] = self._parse(x)
        return out

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def add(self, a, b):
        return np.add(a, b, dtype=np.int64) % self.p

    def sub(self, a, b):
        return np.subtract(a, b, dtype=np.int64) % self.p

    def neg(self, a):
        return np.negative(np.asarray(a, dtype=np.int64)) % self.p

    def mul(self, a, b):
        return np.multiply(a, b, dtype=np.int64) % self.p

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return np.int64(pow(x, -1, self.p))

    def matmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[-1] * (self.p - 1) ** 2 >= _INT64_SAFE:
            return np.asarray((a.astype(object) @ b.astype(object)) % self.p, dtype=np.int64)
        return np.matmul(a, b) % self.p

    def einsum(self, subscripts, *operands):
        ops = [np.asarray(o, dtype=np.int64) for o in operands]
        bound = _summed_size(subscripts, ops) * (self.p - 1) ** len(ops)
        if bound < _INT64_SAFE:
            return np.einsum(subscripts, *ops, optimize=len(ops) > 2) % self.p
        res = np.einsum(subscripts, *[o.astype(object) for o in ops], optimize=len(ops) > 2)
        return np.asarray(res % self.p, dtype=np.int64)

    def einsum_scaled(self, subscripts, *operands):
        return self.einsum(subscripts, *operands)

    def rref(self, a):
        a = np.asarray(a, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("expected a matrix")
        if a.shape[0] == 0 or a.shape[1] == 0:
            return np.zeros((0, a.shape[1]), dtype=np.int64), ()
        red, piv = rref_mod_p(a, self.p)
        return red[: len(piv)].copy(), tuple(int(c) for c in piv)

    def to_json(self, x):
        return int(x) % self.p

    def field_json(self):
        return {"prime": self.p}


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


# ---------------------------------------------------------------------------
# rational RREF: multimodular elimination, rational reconstruction, and an
# exact certificate that the reconstructed matrix has the same row space


_PRIME_CACHE: list[int] = [2**31 - 1]


def _prime(k: int) -> int:
    """The k-th prime below 2**31, counting downwards."""
    while len(_PRIME_CACHE) <= k:
        q = mpz(_PRIME_CACHE[-1] - 2)
        while not gmpy2.is_prime(q):
            q -= 2
        _PRIME_CACHE.append(int(q))
    return _PRIME_CACHE[k]


def _ratrecon(r: int, m: int, bound: int):
    """Return n/d with |n|, d <= bound and n = d r mod m, or None."""
    r0, r1 = m, r % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gmpy2.gcd(r1, s1) != 1:
        return None
    return mpq(r1, s1)


def _integer_rows(a):
    """Scale each row to a primitive integer vector; drop zero rows."""
    if a.size == 0:
        return np.zeros((0, a.shape[1]), dtype=object)
    d = np.lcm.reduce(_den(a), axis=1)
    n = _num(a * d[:, None])
    g = np.gcd.reduce(n, axis=1)
    keep = g != 0
    n = n[keep]
    g = g[keep]
    return (n // g[:, None]).astype(object)


def _rref_direct(a):
    """Plain Gauss-Jordan on mpq entries; used for small inputs and as an oracle."""
    rows = [[mpq(x) for x in r] for r in a]
    n_rows = len(rows)
    n_cols = a.shape[1]
    piv = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        k = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(n_rows):
            f = rows[i][c]
            if i != r and f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        piv.append(c)
        r += 1
    out = np.empty((r, n_cols), dtype=object)
    for i in range(r):
        out[i] = [mpq(x) for x in rows[i]]
    return out, tuple(piv)


def _rref_modular(a_int, n_cols):
    rows_int = a_int
    small = bool(np.max(np.abs(rows_int)) < _INT64_SAFE)
    a64 = rows_int.astype(np.int64) if small else None
    best_piv = None
    residues = None
    modulus = 1
    for k in count():
        if k > 400:  # pragma: no cover - would need astronomically large entries
            raise ArithmeticError("rational reconstruction did not converge")
        p = _prime(k)
        ap = (a64 % p) if small else (rows_int % p).astype(np.int64)
        red, piv = rref_mod_p(ap, p)
        piv = tuple(int(c) for c in piv)
        if best_piv is None or len(piv) > len(best_piv) or (
            len(piv) == len(best_piv) and piv < best_piv
        ):
            best_piv = piv
            residues = red[: len(piv)].astype(object)
            modulus = p
        elif piv != best_piv:
            continue
        else:
            m_inv = pow(modulus % p, -1, p)
            cur = red[: len(piv)].astype(object)
            residues = residues + modulus * (((cur - residues) * m_inv) % p)
            modulus *= p
        cand = _reconstruct(residues, best_piv, modulus, n_cols)
        if cand is not None and _certify(rows_int, cand, best_piv):
            return cand, best_piv


def _reconstruct(residues, piv, modulus, n_cols):
    rank = len(piv)
    out = np.full((rank, n_cols), mpq(0), dtype=object)
    bound = gmpy2.isqrt(modulus // 2)
    pivset = set(piv)
    for i in range(rank):
        out[i, piv[i]] = mpq(1)
        for j in range(piv[i] + 1, n_cols):
            if j in pivset:
                continue
            r = int(residues[i, j])
            if r == 0:
                continue
            v = _ratrecon(r, modulus, bound)
            if v is None:
                return None
            out[i, j] = v
    return out


def _certify(a_int, cand, piv):
    """Check every row of a_int lies in the row space of cand.

    Together with rank(cand) = rank of a modulo some prime <= rank over QQ,
    this proves the two row spaces coincide.
    """
    if cand.shape[0] == 0:
        return not np.any(a_int != 0)
    n, d = Rationals.integerize(cand)
    lhs = a_int * d if d != 1 else a_int
    coeff = a_int[:, list(piv)]
    bound = int(np.max(np.abs(coeff))) * int(np.max(np.abs(n))) * len(piv)
    if n.dtype == np.int64 and bound < _INT64_SAFE and np.max(np.abs(lhs)) < _INT64_SAFE:
        return bool(np.array_equal(lhs.astype(np.int64), coeff.astype(np.int64) @ n))
    return bool(np.all(lhs == coeff.astype(object) @ n.astype(object)))


_DIRECT_LIMIT = 64


def _rref_rational(a):
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    n_cols = a.shape[1]
    if a.shape[0] == 0 or n_cols == 0:
        return np.empty((0, n_cols), dtype=object), ()
    a_int = _integer_rows(a)
    if a_int.shape[0] == 0:
        return np.empty((0, n_cols), dtype=object), ()
    if a_int.size <= _DIRECT_LIMIT:
        return _rref_direct(a_int)
    return _rref_modular(a_int, n_cols)
