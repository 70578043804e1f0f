"""Exact Lambda-determinants with index-dependent weights, ASM combinatorics and T-system tools."""

from .exact import ExactRational, Jet, LaurentPolynomial, PolyRing

__version__ = "0.1.0"

__all__ = ["ExactRational", "Jet", "LaurentPolynomial", "PolyRing", "__version__"]
