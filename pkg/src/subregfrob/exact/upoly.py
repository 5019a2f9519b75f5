"""Univariate polynomials over Q(sqrt3, sqrt5) as coefficient lists, constant term first."""

from __future__ import annotations

from typing import Sequence

from .nf import NFElem, ONE, ZERO, nf

__all__ = ["trim", "deriv", "divmod_poly", "gcd_poly", "squarefree_part", "eval_at_matrix"]

UPoly = list  # list[NFElem]


def trim(p: Sequence) -> UPoly:
    p = [nf(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def deriv(p: Sequence) -> UPoly:
    return trim([c * k for k, c in enumerate(p)][1:])


def divmod_poly(a: Sequence, b: Sequence) -> tuple[UPoly, UPoly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = b[-1].inverse()
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv
        q[shift] = c
        for k, bc in enumerate(b):
            r[shift + k] = r[shift + k] - c * bc
        r = trim(r)
    return trim(q), r


def gcd_poly(a: Sequence, b: Sequence) -> UPoly:
    """Monic greatest common divisor."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


def squarefree_part(p: Sequence) -> UPoly:
    """``p / gcd(p, p')``, made monic."""
    p = trim(p)
    q, r = divmod_poly(p, gcd_poly(p, deriv(p)))
    assert not r
    inv = q[-1].inverse()
    return [c * inv for c in q]


def eval_at_matrix(p: Sequence, m):
    """Horner evaluation of ``p`` at a square :class:`ExactMatrix`."""
    from .matrix import ExactMatrix

    n = m.rows
    acc = ExactMatrix.zeros(n, n, zero=m.zero)
    ident = ExactMatrix.identity(n, one=m.zero + ONE, zero=m.zero)
    for c in reversed(trim(p)):
        acc = acc @ m + ident.scale(c)
    return acc
