"""Input data for D4: the sl2-triple and six lowest-weight vectors in gl(8).

Matrices are given as sparse lists of ``((row, col), value)`` with 1-based
indices, i.e. ``sigma_{r,c}`` is the elementary matrix with a one at (r, c).
"""

from __future__ import annotations

from fractions import Fraction

from .exact import SQRT3, SQRT5, ExactMatrix, nf
from .exact.nf import ZERO

N = 8

_S35 = SQRT3 / SQRT5  # sqrt(3/5)

E_TERMS = [((2, 1), 1), ((3, 1), -1), ((4, 3), 1), ((5, 2), Fraction(-1, 2)),
           ((6, 5), 1), ((7, 4), Fraction(1, 2)), ((8, 6), 1), ((8, 7), 1)]
H_TERMS = [((1, 1), -4), ((2, 2), -2), ((3, 3), -2), ((6, 6), 2), ((7, 7), 2), ((8, 8), 4)]
F_TERMS = [((1, 2), 2), ((1, 3), -2), ((2, 4), -2), ((2, 5), -8), ((3, 4), 4), ((3, 5), 4),
           ((4, 6), 4), ((4, 7), 8), ((5, 6), 4), ((5, 7), 2), ((6, 8), 2), ((7, 8), 2)]

# lowest-weight vectors X^i_{-eta_i}, i = 2..6 (module 1 is spanned by the triple)
LOWEST_TERMS = {
    2: [((3, 8), 24 * SQRT3), ((1, 6), -24 * SQRT3)],
    3: [((1, 6), -24), ((1, 7), -48), ((2, 8), -48), ((3, 8), 24)],
    4: [((1, 2), -4 * _S35), ((1, 3), -2 * _S35), ((2, 4), 2 * _S35), ((3, 4), 2 * _S35),
        ((3, 5), -12 * _S35), ((4, 6), -12 * _S35), ((5, 6), 2 * _S35), ((5, 7), -2 * _S35),
        ((6, 8), 2 * _S35), ((7, 8), -4 * _S35)],
    5: [((1, 2), -8 / SQRT5), ((1, 3), -2 * SQRT5), ((2, 4), -2 * SQRT5), ((2, 5), 8 / SQRT5),
        ((3, 4), 2 / SQRT5), ((3, 5), -4 / SQRT5), ((4, 6), -4 / SQRT5), ((4, 7), -8 / SQRT5),
        ((5, 6), 2 / SQRT5), ((5, 7), 2 * SQRT5), ((6, 8), 2 * SQRT5), ((7, 8), -8 / SQRT5)],
    6: [((1, 4), -4 * SQRT3), ((1, 5), 8 * SQRT3), ((2, 6), 8 * SQRT3), ((3, 7), 8 * SQRT3),
        ((4, 8), 8 * SQRT3), ((5, 8), -4 * SQRT3)],
}

WEIGHTS = (1, 3, 3, 1, 1, 2)
RANK = 4


def sigma(terms, n: int = N) -> ExactMatrix:
    m = [[ZERO] * n for _ in range(n)]
    for (r, c), v in terms:
        m[r - 1][c - 1] = m[r - 1][c - 1] + nf(v)
    return ExactMatrix(m, zero=ZERO)


def triple_matrices() -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    return sigma(E_TERMS), sigma(H_TERMS), sigma(F_TERMS)


def lowest_weight_matrices() -> dict[int, ExactMatrix]:
    return {i: sigma(t) for i, t in LOWEST_TERMS.items()}
