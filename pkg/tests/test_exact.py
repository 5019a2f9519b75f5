from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from subregfrob.exact import (SQRT3, SQRT5, SQRT15, ExactMatrix, MPoly, NFElem, NFZeroDivisionError,
                              QuotientRing, SingularMatrixError, mat_inverse, nf, upoly)
from subregfrob.exact.nf import ONE, ZERO

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elems = st.builds(NFElem, small, small, small, small)
nonzero = elems.filter(lambda x: not x.is_zero())


def to_sympy(x: NFElem):
    a, b, c, d = x.coeffs
    return (sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * sympy.sqrt(3)
            + sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(5)
            + sympy.Rational(d.numerator, d.denominator) * sympy.sqrt(15))


def test_difference_of_squares():
    assert (1 + SQRT3) * (1 - SQRT3) == nf(-2)


def test_basis_multiplication():
    assert SQRT3 * SQRT5 == SQRT15
    assert SQRT15 * SQRT15 == 15


def test_inverse_example():
    x = 2 + SQRT5
    assert x.inverse() == -2 + SQRT5
    assert x * x.inverse() == 1


def test_division_by_zero_raises():
    with pytest.raises(NFZeroDivisionError):
        ONE / ZERO


@given(elems, elems, elems)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0


@given(nonzero)
def test_inverse_property(x):
    assert x * x.inverse() == 1
    assert x / x == 1


@settings(max_examples=40, deadline=None)
@given(elems, nonzero)
def test_arithmetic_agrees_with_sympy(x, y):
    prod = to_sympy(x * y) - sympy.expand(to_sympy(x) * to_sympy(y))
    quot = to_sympy(x / y) - to_sympy(x) / to_sympy(y)
    assert sympy.simplify(prod) == 0
    assert sympy.nsimplify(sympy.radsimp(quot)) == 0


@given(elems)
def test_sqrt_of_square(x):
    r = (x * x).sqrt()
    assert r is not None
    assert r * r == x * x


def test_sqrt_non_squares():
    assert nf(2).sqrt() is None
    assert nf(3).sqrt() in (SQRT3, -SQRT3)
    assert (2 + SQRT3).sqrt() is None or (2 + SQRT3).sqrt() ** 2 == 2 + SQRT3


def test_json_round_trip():
    x = nf(Fraction(3, 7)) + SQRT15 * Fraction(-2, 5)
    assert NFElem.from_json(x.to_json()) == x
    assert x.to_json() == ["3/7", "0", "0", "-2/5"]


# -- polynomials -----------------------------------------------------------

X = [MPoly.var(6, i) for i in range(6)]


def test_diff_examples():
    assert (X[5] ** 2 * -27).diff(5) == X[5] * -54
    assert MPoly.const(6, 7).diff(2) == MPoly.zero(6)


def random_poly(rng, nvars=3, terms=5, deg=4):
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        out[e] = nf(Fraction(rng.randint(-9, 9), rng.randint(1, 5))) + SQRT5 * rng.randint(-3, 3)
    return MPoly.from_terms(nvars, out)


def test_diff_distributes_at_random_points():
    rng = random.Random(7)
    for _ in range(100):
        p, q = random_poly(rng), random_poly(rng)
        pt = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)]
        i = rng.randrange(3)
        assert (p + q).diff(i).evaluate(pt) == p.diff(i).evaluate(pt) + q.diff(i).evaluate(pt)


def test_diff_commutes():
    rng = random.Random(3)
    for _ in range(30):
        p = random_poly(rng)
        assert p.diff(0).diff(2) == p.diff(2).diff(0)


def test_leibniz_and_weighted_degree():
    rng = random.Random(11)
    w = [4, 8, 6]
    for _ in range(20):
        p, q = random_poly(rng), random_poly(rng)
        assert (p * q).diff(1) == p.diff(1) * q + p * q.diff(1)
    mono = MPoly.from_terms(3, {(1, 2, 0): 5})
    assert mono.weighted_degrees(w) == {20}
    assert mono.diff(1).weighted_degrees(w) == {12}


def test_divexact_and_sqrt():
    rng = random.Random(5)
    for _ in range(10):
        p, q = random_poly(rng), random_poly(rng)
        if not q:
            continue
        assert (p * q).divexact(q) == p
        assert (q * q).sqrt() in (q, -q)
    assert (X[0] ** 2 + X[1]).sqrt() is None


def test_subs_matches_evaluation():
    rng = random.Random(2)
    p = random_poly(rng)
    images = [random_poly(rng) for _ in range(3)]
    pt = [Fraction(1, 2), Fraction(-2), Fraction(3, 5)]
    inner = [im.evaluate(pt) for im in images]
    assert p.subs(images).evaluate(pt) == p.evaluate(inner)


def test_mpoly_json_round_trip():
    p = random_poly(random.Random(1))
    assert MPoly.from_json(3, p.to_json()) == p


# -- matrices --------------------------------------------------------------


def rational_matrix(rng, n):
    return ExactMatrix([[nf(Fraction(rng.randint(-6, 6), rng.randint(1, 3))) for _ in range(n)]
                        for _ in range(n)], zero=ZERO)


def test_identity_inverse():
    eye = ExactMatrix.identity(4)
    assert mat_inverse(eye) == eye


def test_random_inverse_multiplies_back():
    rng = random.Random(0)
    done = 0
    while done < 10:
        m = rational_matrix(rng, 4)
        if not m.det():
            continue
        assert m @ mat_inverse(m) == ExactMatrix.identity(4)
        done += 1


def test_det_multiplicative():
    rng = random.Random(4)
    for _ in range(10):
        a, b = rational_matrix(rng, 3), rational_matrix(rng, 3)
        assert (a @ b).det() == a.det() * b.det()


def test_det_matches_sympy():
    rng = random.Random(9)
    m = rational_matrix(rng, 5)
    sm = sympy.Matrix([[sympy.Rational(x.coeffs[0].numerator, x.coeffs[0].denominator) for x in r]
                       for r in m.entries])
    assert Fraction(str(sm.det())) == m.det().to_rational()


def test_singular_matrix_error_carries_determinant():
    m = ExactMatrix.from_scalars([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError) as exc:
        mat_inverse(m)
    assert exc.value.determinant == 0


def test_polynomial_diagonal_inverse():
    p = X[0] + X[1] ** 2
    q = X[2] * 3 - 1
    z = MPoly.zero(6)
    inv = mat_inverse(ExactMatrix([[p, z], [z, q]], zero=z))
    assert inv[0, 0].num * p == inv[0, 0].den
    assert inv[1, 1].num * q == inv[1, 1].den
    assert not inv[0, 1] and not inv[1, 0]


def test_polynomial_inverse_with_constant_det():
    one = MPoly.const(2, 1)
    x = MPoly.var(2, 0)
    m = ExactMatrix([[one, x], [MPoly.zero(2), one]], zero=MPoly.zero(2))
    inv = mat_inverse(m)
    assert inv[0, 1] == -x


def test_charpoly_matches_sympy():
    rng = random.Random(12)
    m = rational_matrix(rng, 5)
    cp = m.charpoly()
    P = sympy.symbols("P")
    sm = sympy.Matrix([[sympy.Rational(x.coeffs[0].numerator, x.coeffs[0].denominator) for x in r]
                       for r in m.entries])
    coeffs = sympy.Poly(sm.charpoly(P).as_expr(), P).all_coeffs()
    assert [Fraction(str(c)) for c in coeffs] == [c.to_rational() for c in cp]


def test_upoly_squarefree_and_gcd():
    # (x - 1)^2 (x + 2), constant term first
    f = [nf(2), nf(-3), nf(0), nf(1)]
    assert upoly.squarefree_part(f) == [nf(-2), nf(1), nf(1)]
    assert upoly.gcd_poly(f, upoly.deriv(f)) == [nf(-1), nf(1)]


# -- quotient ring ---------------------------------------------------------


def test_quotient_ring_relation_and_implicit_derivative():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    ring = QuotientRing(x * 2, y + x * x, names=["x", "y"])
    Z = ring.Z
    assert ring.relation_holds(Z)
    # differentiate the relation: 2Z Z' = p1' Z + p1 Z' + p0'
    for i in range(2):
        dz = ring.dZ(i)
        lhs = Z * dz * 2
        rhs = Z * ring.poly(ring.p1.diff(i)) + dz * ring.poly(ring.p1) + ring.poly(ring.p0.diff(i))
        assert lhs == rhs
    # swap_root rewrites in the other root; both agree numerically at a point
    e = Z * ring.var(0) + ring.var(1)
    pt = [Fraction(1), Fraction(3)]  # Z^2 = 2Z + 4
    z1 = 1 + SQRT5
    z2 = 1 - SQRT5
    assert e.evaluate(pt, z1) == e.swap_root().evaluate(pt, z2)


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_quotient_ring_diff_commutes(a, b):
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    ring = QuotientRing(x * 2, y + x * x)
    e = ring.Z * (ring.var(0) * a + ring.var(1) * b) + ring.var(0) * ring.var(1)
    assert e.diff(0).diff(1) == e.diff(1).diff(0)
