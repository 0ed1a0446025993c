"""Exact linear algebra over QQ and prime fields."""

from ._kernels import jit_enabled, rref_mod_p, set_jit
from .fields import GF, QQ, Field, PrimeField, Rationals
from .linalg import (
    Subspace,
    column_space,
    greatest_backward_invariant,
    intersect,
    inverse,
    nullspace,
    preimage,
    rank,
    rref,
    solve,
)

__all__ = [
    "Field",
    "GF",
    "PrimeField",
    "QQ",
    "Rationals",
    "Subspace",
    "column_space",
    "greatest_backward_invariant",
    "intersect",
    "inverse",
    "jit_enabled",
    "nullspace",
    "preimage",
    "rank",
    "rref",
    "rref_mod_p",
    "set_jit",
    "solve",
]
