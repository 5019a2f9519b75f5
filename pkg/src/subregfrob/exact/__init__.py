"""Exact scalar, polynomial, matrix and quotient-ring arithmetic."""

from .matrix import ExactMatrix, RatFunc, SingularMatrixError, mat_inverse, nullspace, rank, rref, solve
from .mpoly import MPoly, NotDivisibleError
from .nf import SQRT3, SQRT5, SQRT15, NFElem, NFZeroDivisionError, nf
from . import upoly
from .quotient import DegenerateDiscriminantError, QElem, QuotientRing

__all__ = [
    "DegenerateDiscriminantError",
    "ExactMatrix",
    "MPoly",
    "NFElem",
    "NFZeroDivisionError",
    "NotDivisibleError",
    "QElem",
    "QuotientRing",
    "RatFunc",
    "SQRT3",
    "SQRT5",
    "SQRT15",
    "SingularMatrixError",
    "mat_inverse",
    "nf",
    "nullspace",
    "rank",
    "rref",
    "solve",
    "upoly",
]
