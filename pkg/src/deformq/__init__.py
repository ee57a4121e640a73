"""Exact and numeric star-product algebra for bosonic and fermionic phase spaces."""

from .scalar import C, H, HBAR, I, ONE, SQRT2, ZERO, Scalar
from .grassmann import BilinearForm, Multivector

__version__ = "0.1.0"

__all__ = ["Scalar", "Multivector", "BilinearForm", "ZERO", "ONE", "I", "SQRT2", "H", "HBAR", "C"]
