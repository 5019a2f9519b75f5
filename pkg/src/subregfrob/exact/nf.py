"""Exact scalars in the biquadratic field Q(sqrt3, sqrt5).

An element is stored as four integer numerators over one common positive
denominator, ``(a + b*sqrt3 + c*sqrt5 + d*sqrt15) / den``, always reduced so
that the five integers are coprime.  The representation is canonical, so
equality and hashing are structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Union

__all__ = ["NFElem", "NFZeroDivisionError", "SQRT3", "SQRT5", "SQRT15", "nf"]

Scalar = Union["NFElem", int, Fraction]


class NFZeroDivisionError(ZeroDivisionError):
    """Division by the zero element of Q(sqrt3, sqrt5)."""


class NFElem:
    __slots__ = ("_a", "_b", "_c", "_d", "_den", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        fa, fb, fc, fd = (Fraction(x) for x in (a, b, c, d))
        den = fa.denominator * fb.denominator // gcd(fa.denominator, fb.denominator)
        den = den * fc.denominator // gcd(den, fc.denominator)
        den = den * fd.denominator // gcd(den, fd.denominator)
        self._set(
            fa.numerator * (den // fa.denominator),
            fb.numerator * (den // fb.denominator),
            fc.numerator * (den // fc.denominator),
            fd.numerator * (den // fd.denominator),
            den,
        )

    def _set(self, a, b, c, d, den):
        g = gcd(a, b, c, d, den)
        if g != 1:
            a //= g
            b //= g
            c //= g
            d //= g
            den //= g
        self._a, self._b, self._c, self._d, self._den = a, b, c, d, den
        self._hash = None

    @classmethod
    def _raw(cls, a, b, c, d, den) -> NFElem:
        obj = cls.__new__(cls)
        if den < 0:
            a, b, c, d, den = -a, -b, -c, -d, -den
        obj._set(a, b, c, d, den)
        return obj

    @classmethod
    def coerce(cls, x) -> NFElem:
        if isinstance(x, NFElem):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 0, 0, 1)
        if isinstance(x, Fraction):
            return cls._raw(x.numerator, 0, 0, 0, x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to NFElem")

    # -- accessors -------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Rational coordinates on the basis (1, sqrt3, sqrt5, sqrt15)."""
        den = self._den
        return (Fraction(self._a, den), Fraction(self._b, den),
                Fraction(self._c, den), Fraction(self._d, den))

    def is_zero(self) -> bool:
        return not (self._a or self._b or self._c or self._d)

    def is_one(self) -> bool:
        return self._a == 1 and self._den == 1 and not (self._b or self._c or self._d)

    def is_rational(self) -> bool:
        return not (self._b or self._c or self._d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NFElem):
            try:
                other = NFElem.coerce(other)
            except TypeError:
                return NotImplemented
        d1, d2 = self._den, other._den
        if d1 == d2:
            return NFElem._raw(self._a + other._a, self._b + other._b,
                               self._c + other._c, self._d + other._d, d1)
        return NFElem._raw(self._a * d2 + other._a * d1, self._b * d2 + other._b * d1,
                           self._c * d2 + other._c * d1, self._d * d2 + other._d * d1,
                           d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        obj = NFElem.__new__(NFElem)
        obj._a, obj._b, obj._c, obj._d, obj._den = -self._a, -self._b, -self._c, -self._d, self._den
        obj._hash = None
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, NFElem):
            try:
                other = NFElem.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return NFElem.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, NFElem):
            if isinstance(other, int):
                return NFElem._raw(self._a * other, self._b * other, self._c * other,
                                   self._d * other, self._den)
            try:
                other = NFElem.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self._a, self._b, self._c, self._d
        p, q, r, s = other._a, other._b, other._c, other._d
        if not (q or r or s):
            return NFElem._raw(a * p, b * p, c * p, d * p, self._den * other._den)
        if not (b or c or d):
            return NFElem._raw(a * p, a * q, a * r, a * s, self._den * other._den)
        return NFElem._raw(
            a * p + 3 * b * q + 5 * c * r + 15 * d * s,
            a * q + b * p + 5 * (c * s + d * r),
            a * r + c * p + 3 * (b * s + d * q),
            a * s + d * p + b * r + c * q,
            self._den * other._den,
        )

    __rmul__ = __mul__

    def _conj(self, sb, sc):
        # sqrt3 -> sb*sqrt3, sqrt5 -> sc*sqrt5
        return NFElem._raw(self._a, sb * self._b, sc * self._c, sb * sc * self._d, self._den)

    def norm(self) -> Fraction:
        """Field norm down to Q (product of the four conjugates)."""
        n = self * self._conj(-1, 1) * self._conj(1, -1) * self._conj(-1, -1)
        return Fraction(n._a, n._den)

    def inverse(self) -> NFElem:
        if self.is_zero():
            raise NFZeroDivisionError("inverse of zero in Q(sqrt3, sqrt5)")
        if self.is_rational():
            return NFElem._raw(self._den, 0, 0, 0, self._a)
        others = self._conj(-1, 1) * self._conj(1, -1) * self._conj(-1, -1)
        n = self * others
        # n is rational: n._a / n._den
        return NFElem._raw(others._a * n._den, others._b * n._den, others._c * n._den,
                           others._d * n._den, others._den * n._a)

    def sqrt(self) -> NFElem | None:
        """A square root inside the field, or ``None`` if there is none.

        Works down the tower Q(sqrt3)(sqrt5): write ``x = al + be*sqrt5`` and
        look for ``ga + de*sqrt5`` with ``ga^2 + 5 de^2 = al``, ``2 ga de = be``.
        """
        a, b, c, d = self.coeffs
        return _sqrt_biquadratic(a, b, c, d)

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise NFZeroDivisionError("division by zero in Q(sqrt3, sqrt5)")
            return NFElem._raw(self._a, self._b, self._c, self._d, self._den * other)
        if not isinstance(other, NFElem):
            try:
                other = NFElem.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return NFElem.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, NFElem):
            return (self._den == other._den and self._a == other._a and self._b == other._b
                    and self._c == other._c and self._d == other._d)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._a, self._den) == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(Fraction(self._a, self._den))
            else:
                h = hash((self._a, self._b, self._c, self._d, self._den))
            self._hash = h
        return h

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return Fraction(self._a, self._den)

    def __float__(self) -> float:
        return (self._a + self._b * 3 ** 0.5 + self._c * 5 ** 0.5 + self._d * 15 ** 0.5) / self._den

    # -- formatting ------------------------------------------------------

    def to_json(self) -> list[str]:
        return [str(x) for x in self.coeffs]

    @classmethod
    def from_json(cls, data) -> NFElem:
        if len(data) != 4:
            raise ValueError("NFElem JSON must have four rational strings")
        return cls(*(Fraction(x) for x in data))

    def __repr__(self):
        return f"NFElem({', '.join(repr(str(x)) for x in self.coeffs)})"

    def __str__(self):
        parts = []
        for coef, name in zip(self.coeffs, ("", "sqrt3", "sqrt5", "sqrt15")):
            if not coef:
                continue
            if not name:
                parts.append(str(coef))
            elif coef == 1:
                parts.append(name)
            elif coef == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{coef}*{name}")
        if not parts:
            return "0"
        return "+".join(parts).replace("+-", "-")

    def to_latex(self) -> str:
        parts = []
        for coef, name in zip(self.coeffs, ("", r"\sqrt{3}", r"\sqrt{5}", r"\sqrt{15}")):
            if not coef:
                continue
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if mag.denominator == 1:
                body = name if (mag == 1 and name) else f"{mag.numerator}{name}"
            else:
                num = name if mag.numerator == 1 and name else f"{mag.numerator}{name}"
                body = rf"\frac{{{num}}}{{{mag.denominator}}}"
            parts.append((sign, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _sqrt_q(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqrt_q3(p: Fraction, q: Fraction) -> tuple[Fraction, Fraction] | None:
    """Square root of p + q*sqrt3 inside Q(sqrt3)."""
    if not q:
        r = _sqrt_q(p)
        if r is not None:
            return r, Fraction(0)
        r = _sqrt_q(p / 3)
        if r is not None:
            return Fraction(0), r
        return None
    disc = _sqrt_q(p * p - 3 * q * q)
    if disc is None:
        return None
    for cand in ((p + disc) / 2, (p - disc) / 2):
        g = _sqrt_q(cand)
        if g:
            return g, q / (2 * g)
    return None


def _q3_mul(x, y):
    return (x[0] * y[0] + 3 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _q3_inv(x):
    n = x[0] * x[0] - 3 * x[1] * x[1]
    return (x[0] / n, -x[1] / n)


def _sqrt_biquadratic(a, b, c, d) -> NFElem | None:
    al, be = (a, b), (c, d)  # x = al + be*sqrt5 with al, be in Q(sqrt3)
    if not (c or d):
        r = _sqrt_q3(a, b)
        if r is not None:
            return NFElem(r[0], r[1], 0, 0)
        r = _sqrt_q3(a / 5, b / 5)
        if r is not None:
            return NFElem(0, 0, r[0], r[1])
        return None
    al2 = _q3_mul(al, al)
    be2 = _q3_mul(be, be)
    norm = _sqrt_q3(al2[0] - 5 * be2[0], al2[1] - 5 * be2[1])
    if norm is None:
        return None
    for sgn in (1, -1):
        half = ((al[0] + sgn * norm[0]) / 2, (al[1] + sgn * norm[1]) / 2)
        ga = _sqrt_q3(*half)
        if ga is None or not (ga[0] or ga[1]):
            continue
        inv = _q3_inv(ga)
        de = _q3_mul((be[0] / 2, be[1] / 2), inv)
        root = NFElem(ga[0], ga[1], de[0], de[1])
        if root * root == NFElem(a, b, c, d):
            return root
    return None


ZERO = NFElem._raw(0, 0, 0, 0, 1)
ONE = NFElem._raw(1, 0, 0, 0, 1)
SQRT3 = NFElem(0, 1, 0, 0)
SQRT5 = NFElem(0, 0, 1, 0)
SQRT15 = NFElem(0, 0, 0, 1)


def nf(x: Scalar | str) -> NFElem:
    """Coerce ints, Fractions, rational strings and NFElem into the field."""
    if isinstance(x, str):
        return NFElem.coerce(Fraction(x))
    return NFElem.coerce(x)
