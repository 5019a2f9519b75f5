"""Sparse multivariate polynomials with coefficients in Q(sqrt3, sqrt5).

Exponent vectors are packed into a single Python int, ``BITS`` bits per
variable, so that monomial multiplication is integer addition.  Packed keys
compare as a lexicographic monomial order (last variable most significant),
which is what :meth:`MPoly.divexact` relies on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .nf import NFElem, ONE, ZERO, nf

__all__ = ["MPoly", "NotDivisibleError"]

BITS = 16
MASK = (1 << BITS) - 1


class NotDivisibleError(ArithmeticError):
    """Raised by exact division when the remainder is nonzero."""


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (BITS * i)
    return key


def _unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (BITS * i)) & MASK for i in range(nvars))


def _divides(small: int, big: int, nvars: int) -> bool:
    for i in range(nvars):
        sh = BITS * i
        if ((small >> sh) & MASK) > ((big >> sh) & MASK):
            return False
    return True


class MPoly:
    """Immutable polynomial in ``nvars`` variables.

    >>> x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    >>> ((x + y) * (x - y)).terms == {(2, 0): 1, (0, 2): -1}
    True
    """

    __slots__ = ("nvars", "_t")

    def __init__(self, nvars: int, packed: dict | None = None):
        self.nvars = nvars
        self._t = packed if packed is not None else {}

    # -- construction ----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> MPoly:
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> MPoly:
        c = nf(c)
        return cls(nvars, {0: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> MPoly:
        if not 0 <= i < nvars:
            raise IndexError(f"variable {i} out of range for {nvars} variables")
        return cls(nvars, {1 << (BITS * i): ONE})

    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[Sequence[int], object]) -> MPoly:
        packed: dict[int, NFElem] = {}
        for exps, c in terms.items():
            if len(exps) != nvars:
                raise ValueError("exponent vector length does not match nvars")
            c = nf(c)
            if c:
                key = _pack(exps)
                s = packed.get(key, ZERO) + c
                if s:
                    packed[key] = s
                else:
                    packed.pop(key, None)
        return cls(nvars, packed)

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return MPoly.const(self.nvars, other)

    # -- inspection ------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], NFElem]:
        n = self.nvars
        return {_unpack(k, n): c for k, c in self._t.items()}

    def items(self):
        n = self.nvars
        for k, c in self._t.items():
            yield _unpack(k, n), c

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self) -> NFElem:
        return self._t.get(0, ZERO)

    def coefficient(self, exps: Sequence[int]) -> NFElem:
        return self._t.get(_pack(exps), ZERO)

    def total_degree(self) -> int:
        if not self._t:
            return -1
        return max(sum(e) for e in (_unpack(k, self.nvars) for k in self._t))

    def degree_in(self, i: int) -> int:
        if not self._t:
            return -1
        sh = BITS * i
        return max((k >> sh) & MASK for k in self._t)

    def weighted_degrees(self, weights: Sequence) -> set:
        """Set of weighted degrees of all monomials."""
        n = self.nvars
        return {sum(w * e for w, e in zip(weights, _unpack(k, n))) for k in self._t}

    def is_quasihomogeneous(self, weights: Sequence, degree=None) -> bool:
        degs = self.weighted_degrees(weights)
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def weighted_component(self, weights: Sequence, degree) -> MPoly:
        n = self.nvars
        return MPoly(n, {k: c for k, c in self._t.items()
                         if sum(w * e for w, e in zip(weights, _unpack(k, n))) == degree})

    def variables(self) -> set[int]:
        used = 0
        for k in self._t:
            used |= k
        return {i for i in range(self.nvars) if (used >> (BITS * i)) & MASK}

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        out = dict(a)
        for k, c in b.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = nf(other)
            if not c:
                return MPoly(self.nvars)
            if c.is_one():
                return self
            return MPoly(self.nvars, {k: v * c for k, v in self._t.items()})
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, NFElem] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                s = get(k)
                if s is None:
                    out[k] = ca * cb
                else:
                    out[k] = s + ca * cb
        return MPoly(self.nvars, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            if other.is_constant() and other:
                other = other.constant_term()
            else:
                return self.divexact(other)
        inv = nf(other).inverse()
        return MPoly(self.nvars, {k: v * inv for k, v in self._t.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("MPoly powers must be non-negative integers")
        result = MPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divexact(self, other: MPoly) -> MPoly:
        """Quotient ``self / other``; raises :class:`NotDivisibleError` if inexact."""
        other = self._coerce(other)
        if not other._t:
            raise ZeroDivisionError("division by the zero polynomial")
        n = self.nvars
        lk = max(other._t)
        lc_inv = other._t[lk].inverse()
        rem = dict(self._t)
        quo: dict[int, NFElem] = {}
        divisor = list(other._t.items())
        while rem:
            k = max(rem)
            if not _divides(lk, k, n):
                raise NotDivisibleError("polynomial division is not exact")
            qk = k - lk
            qc = rem[k] * lc_inv
            quo[qk] = qc
            for dk, dc in divisor:
                kk = dk + qk
                v = rem.get(kk, ZERO) - qc * dc
                if v:
                    rem[kk] = v
                else:
                    rem.pop(kk, None)
        return MPoly(n, quo)

    def sqrt(self) -> MPoly | None:
        """Exact square root with positive-normalized leading coefficient.

        Returns ``None`` when the polynomial is not a square over the field.
        """
        if not self._t:
            return self
        n = self.nvars
        lk = max(self._t)
        if any(e % 2 for e in _unpack(lk, n)):
            return None
        lc = self._t[lk].sqrt()
        if lc is None:
            return None
        qk = lk >> 1
        root = MPoly(n, {qk: lc})
        twice_inv = (lc * 2).inverse()
        rem = self - root * root
        while rem._t:
            k = max(rem._t)
            if k >= lk or not _divides(qk, k, n):
                return None
            t = MPoly(n, {k - qk: rem._t[k] * twice_inv})
            rem = rem - root * t * 2 - t * t
            root = root + t
        return root

    def divides(self, other: MPoly) -> bool:
        try:
            other.divexact(self)
        except NotDivisibleError:
            return False
        return True

    # -- calculus and substitution ---------------------------------------

    def diff(self, i: int) -> MPoly:
        """Formal partial derivative in variable ``i``."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable {i} out of range for {self.nvars} variables")
        sh = BITS * i
        unit = 1 << sh
        out = {}
        for k, c in self._t.items():
            e = (k >> sh) & MASK
            if e:
                out[k - unit] = c * e
        return MPoly(self.nvars, out)

    def subs(self, images: Sequence[MPoly | object], nvars: int | None = None) -> MPoly:
        """Compose: replace variable ``i`` by ``images[i]``.

        Images may live in a ring with a different variable count (``nvars``),
        or be scalars.
        """
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if nvars is None:
            nvars = next((p.nvars for p in images if isinstance(p, MPoly)), self.nvars)
        imgs = [p if isinstance(p, MPoly) else MPoly.const(nvars, p) for p in images]
        powers: list[dict[int, MPoly]] = [dict() for _ in imgs]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = imgs[i] ** e
            return cache[e]

        out = MPoly(nvars)
        for exps, c in self.items():
            term = MPoly.const(nvars, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> NFElem:
        vals = [nf(v) for v in point]
        total = ZERO
        for exps, c in self.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def partial_evaluate(self, assignments: Mapping[int, object]) -> MPoly:
        """Substitute scalar values for some variables, keeping nvars."""
        images = [nf(assignments[i]) if i in assignments else MPoly.var(self.nvars, i)
                  for i in range(self.nvars)]
        return self.subs(images, nvars=self.nvars)

    def coefficient_in(self, i: int, power: int) -> MPoly:
        """Coefficient of ``x_i**power`` as a polynomial not involving ``x_i``."""
        sh = BITS * i
        mask = MASK << sh
        return MPoly(self.nvars, {k & ~mask: c for k, c in self._t.items()
                                  if (k >> sh) & MASK == power})

    def embed(self, nvars: int, mapping: Sequence[int]) -> MPoly:
        """Re-index variables: old variable ``j`` becomes new variable ``mapping[j]``."""
        out = {}
        for exps, c in self.items():
            new = [0] * nvars
            for j, e in enumerate(exps):
                if e:
                    new[mapping[j]] += e
            out[_pack(new)] = c
        return MPoly(nvars, out)

    def map_coefficients(self, fn) -> MPoly:
        out = {}
        for k, c in self._t.items():
            v = fn(c)
            if v:
                out[k] = v
        return MPoly(self.nvars, out)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self._t == other._t
        if isinstance(other, (int, Fraction, NFElem)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._t.items())))

    # -- serialization ---------------------------------------------------

    def sorted_items(self) -> list[tuple[tuple[int, ...], NFElem]]:
        """Terms in a deterministic order (descending total degree, then lex)."""
        return sorted(self.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def to_json(self) -> list[dict]:
        return [{"exps": list(e), "coeff": c.to_json()} for e, c in self.sorted_items()]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[Mapping]) -> MPoly:
        return cls.from_terms(nvars, {tuple(t["exps"]): NFElem.from_json(t["coeff"]) for t in data})

    def format(self, names: Sequence[str] | None = None, latex: bool = False) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self._t:
            return "0"
        pieces = []
        for exps, c in self.sorted_items():
            mono = []
            for name, e in zip(names, exps):
                if e == 1:
                    mono.append(name)
                elif e > 1:
                    mono.append(f"{name}^{{{e}}}" if latex else f"{name}^{e}")
            mono_s = (" " if latex else "*").join(mono)
            cs = c.to_latex() if latex else str(c)
            multi = sum(x != 0 for x in c.coeffs) > 1
            if multi:
                cs = rf"\left({cs}\right)" if latex else f"({cs})"
            if not mono_s:
                pieces.append(cs)
            elif c == 1:
                pieces.append(mono_s)
            elif c == -1:
                pieces.append("-" + mono_s)
            else:
                pieces.append(f"{cs} {mono_s}" if latex else f"{cs}*{mono_s}")
        out = pieces[0]
        for p in pieces[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.format()})"

    __str__ = format
