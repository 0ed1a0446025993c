"""Gauss-Jordan elimination modulo a prime.

Two interchangeable implementations: a numba-compiled scalar loop and a
vectorised numpy version.  The numba path is used when numba imports and
the environment variable ``HOMLIE_JIT`` is not ``"0"``.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

JIT_AVAILABLE = njit is not None
_use_jit = JIT_AVAILABLE and os.environ.get("HOMLIE_JIT", "1") != "0"


def jit_enabled() -> bool:
    return _use_jit


def set_jit(enabled: bool) -> None:
    """Switch the default elimination backend at runtime."""
    global _use_jit
    if enabled and not JIT_AVAILABLE:
        raise RuntimeError("numba is not importable")
    _use_jit = bool(enabled)


def _rref_mod_p_py(a, p):
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        # modular inverse by extended Euclid
        x0, x1, u, v = 1, 0, a[r, c], p
        while v != 0:
            q = u // v
            u, v = v, u - q * v
            x0, x1 = x1, x0 - q * x1
        inv = x0 % p
        for j in range(c, cols):
            a[r, j] = a[r, j] * inv % p
        for i in range(rows):
            f = a[i, c]
            if i != r and f != 0:
                for j in range(c, cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots


_rref_mod_p_jit = njit(cache=True)(_rref_mod_p_py) if JIT_AVAILABLE else None


def _rref_mod_p_numpy(a, p):
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv], c:] = a[[piv, r], c:]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        f = a[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - f[hit, None] * a[r, c:]) % p
        pivots[r] = c
        r += 1
    return r, pivots


def rref_mod_p(a: np.ndarray, p: int, backend: str | None = None):
    """Reduce a copy of the int64 matrix ``a`` (entries in [0, p)) to RREF.

    Requires p < 2**31 so that products fit in int64.  Returns
    ``(reduced, pivot_columns)``.
    """
    if p >= 2**31:
        raise ValueError("modulus too large for int64 elimination")
    a = np.array(a, dtype=np.int64, copy=True, order="C")
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    if backend is None:
        backend = "numba" if _use_jit else "numpy"
    if backend == "numba":
        if not JIT_AVAILABLE:
            raise RuntimeError("numba is not importable")
        rank, piv = _rref_mod_p_jit(a, np.int64(p))
    elif backend == "numpy":
        rank, piv = _rref_mod_p_numpy(a, p)
    elif backend == "python":
        rank, piv = _rref_mod_p_py(a, p)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return a, piv[:rank].copy()
