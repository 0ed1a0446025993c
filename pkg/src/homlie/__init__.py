"""Exact computations with finite-dimensional Hom-Lie algebras."""

from .algebra import AlgebraError, HomLieAlgebra, Morphism, validate
from .exactlin import GF, QQ

__all__ = ["AlgebraError", "GF", "HomLieAlgebra", "Morphism", "QQ", "validate"]
