"""Arithmetic in K[x][Z]/(Z^2 - p1 Z - p0), localized at the discriminant.

Every element is stored as ``(a + b*Z) / disc**k`` with ``a, b`` polynomials
in the base variables and ``disc = p1**2 + 4*p0``.  Denominators never
contain anything other than powers of ``disc``: that is exactly what implicit
differentiation of ``Z`` produces, since ``(2Z - p1)**2 = disc``.
"""

from __future__ import annotations

from typing import Sequence

from .mpoly import MPoly, NotDivisibleError
from .nf import NFElem, nf

__all__ = ["QuotientRing", "QElem", "DegenerateDiscriminantError"]


class DegenerateDiscriminantError(ArithmeticError):
    """``2Z - p1`` is a zero divisor: the discriminant vanishes identically."""


class QuotientRing:
    def __init__(self, p1: MPoly, p0: MPoly, names: Sequence[str] | None = None, zname: str = "Z"):
        if p1.nvars != p0.nvars:
            raise ValueError("p1 and p0 must live in the same polynomial ring")
        self.nvars = p1.nvars
        self.p1, self.p0 = p1, p0
        self.disc = p1 * p1 + p0 * 4
        if not self.disc:
            raise DegenerateDiscriminantError("discriminant p1^2 + 4 p0 vanishes identically")
        self.names = list(names) if names else [f"x{i + 1}" for i in range(self.nvars)]
        self.zname = zname
        self._dz = None

    # -- element factories -----------------------------------------------

    def zero(self) -> QElem:
        return QElem(self, MPoly.zero(self.nvars), MPoly.zero(self.nvars), 0)

    def one(self) -> QElem:
        return self.const(1)

    def const(self, c) -> QElem:
        return QElem(self, MPoly.const(self.nvars, c), MPoly.zero(self.nvars), 0)

    def poly(self, p: MPoly) -> QElem:
        return QElem(self, p, MPoly.zero(self.nvars), 0)

    def var(self, i: int) -> QElem:
        return self.poly(MPoly.var(self.nvars, i))

    @property
    def Z(self) -> QElem:
        return QElem(self, MPoly.zero(self.nvars), MPoly.const(self.nvars, 1), 0)

    def from_poly_in_z(self, p: MPoly) -> QElem:
        """Reduce a polynomial in ``nvars + 1`` variables (the last one is Z)."""
        if p.nvars != self.nvars + 1:
            raise ValueError("expected one extra variable for Z")
        zi = self.nvars
        a = MPoly.zero(self.nvars)
        b = MPoly.zero(self.nvars)
        # Z^n = alpha_n + beta_n Z
        alpha, beta = [MPoly.const(self.nvars, 1)], [MPoly.zero(self.nvars)]
        for n in range(p.degree_in(zi) + 1):
            if n >= len(alpha):
                al, be = alpha[-1], beta[-1]
                alpha.append(be * self.p0)
                beta.append(al + be * self.p1)
            coef = p.coefficient_in(zi, n).embed(self.nvars, list(range(self.nvars)) + [0])
            if coef:
                a = a + coef * alpha[n]
                b = b + coef * beta[n]
        return QElem(self, a, b, 0)

    def dZ(self, i: int) -> QElem:
        """Implicit derivative of Z: (Z p1' + p0') (2Z - p1)^{-1}."""
        num = self.Z * self.poly(self.p1.diff(i)) + self.poly(self.p0.diff(i))
        return num * self.inv_two_z_minus_p1()

    def inv_two_z_minus_p1(self) -> QElem:
        return QElem(self, -self.p1, MPoly.const(self.nvars, 2), 1)

    def relation_holds(self, z: QElem) -> bool:
        return (z * z - z * self.poly(self.p1) - self.poly(self.p0)).is_zero()

    def substitute(self, images: Sequence[MPoly], names: Sequence[str] | None = None) -> QuotientRing:
        """The same quotient ring after a polynomial change of base variables."""
        return QuotientRing(self.p1.subs(images), self.p0.subs(images), names=names, zname=self.zname)

    def transport(self, elem: QElem, images: Sequence[MPoly]) -> QElem:
        """Carry ``elem`` from another quotient ring into this one.

        ``images`` expresses the other ring's base variables in this ring's;
        the caller guarantees the relations correspond under the substitution.
        """
        return QElem(self, elem.a.subs(images, self.nvars), elem.b.subs(images, self.nvars), elem.k)

    def conjugate_root(self) -> QElem:
        """The other root ``p1 - Z``."""
        return self.poly(self.p1) - self.Z


class QElem:
    __slots__ = ("ring", "a", "b", "k")

    def __init__(self, ring: QuotientRing, a: MPoly, b: MPoly, k: int = 0):
        self.ring, self.a, self.b, self.k = ring, a, b, k
        if k:
            self._reduce()

    def _reduce(self):
        disc = self.ring.disc
        while self.k:
            if not self.a and not self.b:
                self.k = 0
                break
            try:
                a = self.a.divexact(disc) if self.a else self.a
                b = self.b.divexact(disc) if self.b else self.b
            except NotDivisibleError:
                break
            self.a, self.b, self.k = a, b, self.k - 1

    def _coerce(self, other) -> QElem:
        if isinstance(other, QElem):
            if other.ring is not self.ring:
                raise ValueError("elements of different quotient rings")
            return other
        if isinstance(other, MPoly):
            return self.ring.poly(other)
        return self.ring.const(other)

    def _lift(self, k: int) -> tuple[MPoly, MPoly]:
        if k == self.k:
            return self.a, self.b
        f = self.ring.disc ** (k - self.k)
        return self.a * f, self.b * f

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        k = max(self.k, other.k)
        a1, b1 = self._lift(k)
        a2, b2 = other._lift(k)
        return QElem(self.ring, a1 + a2, b1 + b2, k)

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.ring, -self.a, -self.b, self.k)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, NFElem)) or not isinstance(other, (QElem, MPoly)):
            c = nf(other)
            return QElem(self.ring, self.a * c, self.b * c, self.k)
        other = self._coerce(other)
        r = self.ring
        bd = self.b * other.b
        a = self.a * other.a + bd * r.p0
        b = self.a * other.b + self.b * other.a + bd * r.p1
        return QElem(r, a, b, self.k + other.k)

    __rmul__ = __mul__

    def __truediv__(self, c):
        inv = nf(c).inverse()
        return QElem(self.ring, self.a * inv, self.b * inv, self.k)

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    # -- calculus --------------------------------------------------------

    def diff(self, i: int) -> QElem:
        r = self.ring
        dz = r.dZ(i)
        core = r.poly(self.a.diff(i)) + r.poly(self.b.diff(i)) * r.Z + dz * self.b
        out = QElem(r, core.a, core.b, core.k + self.k)
        if self.k:
            base = QElem(r, self.a, self.b, 0)
            ddisc = r.disc.diff(i) * self.k
            out = out - QElem(r, (base * ddisc).a, (base * ddisc).b, self.k + 1)
        return out

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        """True when the element lies in K[x] (no Z, no denominator)."""
        return self.k == 0 and not self.b

    def free_of(self, i: int) -> bool:
        """True when no base variable ``i`` appears (Z counts as free)."""
        return self.a.degree_in(i) <= 0 and self.b.degree_in(i) <= 0 and (
            self.k == 0 or self.ring.disc.degree_in(i) <= 0)

    def is_constant(self) -> bool:
        return self.k == 0 and not self.b and self.a.is_constant()

    def constant_value(self) -> NFElem:
        if not self.is_constant():
            raise ValueError("element is not constant")
        return self.a.constant_term()

    def evaluate(self, point: Sequence, z) -> NFElem:
        """Value at a base point with a chosen root value ``z`` of the relation."""
        z = nf(z)
        d = self.ring.disc.evaluate(point)
        if self.k and not d:
            raise ZeroDivisionError("discriminant vanishes at evaluation point")
        val = self.a.evaluate(point) + self.b.evaluate(point) * z
        return val / d ** self.k if self.k else val

    def swap_root(self) -> QElem:
        """Rewrite in terms of the conjugate root ``Z' = p1 - Z``."""
        r = self.ring
        # a + bZ = a + b(p1 - Z') = (a + b p1) - b Z'
        return QElem(r, self.a + self.b * r.p1, -self.b, self.k)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except ValueError:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def format(self, latex: bool = False, names: Sequence[str] | None = None) -> str:
        names = names or self.ring.names
        z = self.ring.zname
        parts = []
        if self.a:
            parts.append(self.a.format(names, latex=latex))
        if self.b:
            bs = self.b.format(names, latex=latex)
            if latex:
                parts.append(rf"{z}\left({bs}\right)")
            else:
                parts.append(f"{z}*({bs})")
        body = " + ".join(parts) if parts else "0"
        if self.k:
            if latex:
                return rf"\frac{{{body}}}{{\Delta^{{{self.k}}}}}"
            return f"({body}) / disc^{self.k}"
        return body

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "disc_power": self.k}

    @classmethod
    def from_json(cls, ring: QuotientRing, data) -> QElem:
        return cls(ring, MPoly.from_json(ring.nvars, data["a"]),
                   MPoly.from_json(ring.nvars, data["b"]), int(data["disc_power"]))

    def __repr__(self):
        return f"QElem({self.format()})"
