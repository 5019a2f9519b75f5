"""Algebraic Frobenius manifolds from subregular classical W-algebras (type D4)."""

__version__ = "0.1.0"
