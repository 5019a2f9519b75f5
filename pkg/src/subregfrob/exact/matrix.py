"""Dense matrices over exact rings (``NFElem``, ``MPoly`` or quotient-ring elements).

Determinants and inverses over polynomial rings use fraction-free
(Bareiss) elimination, so every intermediate quantity is a minor of the
input and all divisions are exact.  Rank, row reduction and null spaces are
only offered over the field Q(sqrt3, sqrt5).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .mpoly import MPoly, NotDivisibleError
from .nf import NFElem, ONE, ZERO, nf

__all__ = [
    "ExactMatrix",
    "RatFunc",
    "SingularMatrixError",
    "mat_inverse",
    "nullspace",
    "rank",
    "rref",
    "solve",
]


class SingularMatrixError(ArithmeticError):
    """Matrix is not invertible; ``determinant`` holds the vanishing value."""

    def __init__(self, message: str, determinant=None):
        super().__init__(message)
        self.determinant = determinant


def _is_zero(x) -> bool:
    return not x


def _divexact(a, b):
    if isinstance(a, MPoly):
        return a.divexact(b)
    return a / b


class ExactMatrix:
    __slots__ = ("rows", "cols", "entries", "zero")

    def __init__(self, entries: Sequence[Sequence], zero=None):
        self.entries = [list(r) for r in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix rows")
        if zero is None:
            zero = self.entries[0][0] * 0 if self.rows and self.cols else ZERO
        self.zero = zero

    # -- construction ----------------------------------------------------

    @classmethod
    def identity(cls, n: int, one=ONE, zero=ZERO) -> ExactMatrix:
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], zero=zero)

    @classmethod
    def zeros(cls, rows: int, cols: int, zero=ZERO) -> ExactMatrix:
        return cls([[zero] * cols for _ in range(rows)], zero=zero)

    @classmethod
    def from_scalars(cls, rows: Sequence[Sequence]) -> ExactMatrix:
        return cls([[nf(x) for x in r] for r in rows], zero=ZERO)

    @classmethod
    def diag(cls, values: Sequence, zero=None) -> ExactMatrix:
        if zero is None:
            zero = values[0] * 0
        n = len(values)
        return cls([[values[i] if i == j else zero for j in range(n)] for i in range(n)], zero=zero)

    # -- access ----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> list:
        return list(self.entries[i])

    def col(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        return ExactMatrix([[self.entries[i][j] for j in cols] for i in rows], zero=self.zero)

    def map(self, fn: Callable) -> ExactMatrix:
        new = [[fn(x) for x in r] for r in self.entries]
        return ExactMatrix(new, zero=fn(self.zero) if new and new[0] else self.zero)

    def copy(self) -> ExactMatrix:
        return ExactMatrix(self.entries, zero=self.zero)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_shape(other)
        return ExactMatrix([[a + b for a, b in zip(r, s)]
                            for r, s in zip(self.entries, other.entries)], zero=self.zero)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_shape(other)
        return ExactMatrix([[a - b for a, b in zip(r, s)]
                            for r, s in zip(self.entries, other.entries)], zero=self.zero)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix([[-a for a in r] for r in self.entries], zero=self.zero)

    def scale(self, c) -> ExactMatrix:
        return ExactMatrix([[a * c for a in r] for r in self.entries], zero=self.zero)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return self @ c
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        zero = self.zero
        ocols = [other.col(j) for j in range(other.cols)]
        out = []
        for r in self.entries:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for col in ocols:
                acc = zero
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return ExactMatrix(out, zero=zero)

    def commutator(self, other: ExactMatrix) -> ExactMatrix:
        return self @ other - other @ self

    def transpose(self) -> ExactMatrix:
        return ExactMatrix([list(c) for c in zip(*self.entries)], zero=self.zero)

    T = property(transpose)

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        acc = self.zero
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(_is_zero(x) for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    __hash__ = None

    def _check_shape(self, other: ExactMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def charpoly(self) -> list:
        """Coefficients ``c_0 = 1, c_1, ..., c_n`` of ``det(P*I - M) = sum c_k P^(n-k)``.

        Faddeev-LeVerrier: division-free apart from the integers ``1..n``, so it
        works verbatim over polynomial rings.
        """
        if not self.is_square():
            raise ValueError("characteristic polynomial of a non-square matrix")
        n = self.rows
        one = self.zero + ONE
        ident = ExactMatrix.identity(n, one=one, zero=self.zero)
        coeffs = [one]
        acc = ident
        for k in range(1, n + 1):
            prod = self @ acc
            ck = prod.trace() * nf(Fraction(-1, k))
            coeffs.append(ck)
            acc = prod + ident.scale(ck)
        return coeffs

    # -- fraction-free elimination ----------------------------------------

    def det(self):
        """Determinant by Bareiss elimination (exact over integral domains)."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return ONE
        m = [list(r) for r in self.entries]
        sign = 1
        prev = None
        for k in range(n - 1):
            if _is_zero(m[k][k]):
                piv = next((i for i in range(k + 1, n) if not _is_zero(m[i][k])), None)
                if piv is None:
                    return self.zero
                m[k], m[piv] = m[piv], m[k]
                sign = -sign
            akk = m[k][k]
            rk = m[k]
            for i in range(k + 1, n):
                ri = m[i]
                aik = ri[k]
                for j in range(k + 1, n):
                    v = ri[j] * akk - aik * rk[j] if aik else ri[j] * akk
                    ri[j] = v if prev is None else _divexact(v, prev)
                ri[k] = self.zero
            prev = akk
        d = m[n - 1][n - 1]
        return -d if sign < 0 else d

    def adjugate_det(self) -> tuple[ExactMatrix, object]:
        """Fraction-free Gauss-Jordan on ``[M | I]``.

        Returns ``(R, d)`` with ``R @ M == d * I`` and ``d == det(M)`` up to the
        row-swap sign (``R / d`` is always the inverse).  Raises
        :class:`SingularMatrixError` when a pivot column is exhausted.
        """
        if not self.is_square():
            raise SingularMatrixError("only square matrices can be inverted")
        n = self.rows
        zero = self.zero
        one = zero + 1
        aug = [list(r) + [one if i == j else zero for j in range(n)]
               for i, r in enumerate(self.entries)]
        width = 2 * n
        prev = None
        for k in range(n):
            if _is_zero(aug[k][k]):
                piv = None
                best = None
                for i in range(k + 1, n):
                    if not _is_zero(aug[i][k]):
                        size = len(aug[i][k]) if isinstance(aug[i][k], MPoly) else 0
                        if best is None or size < best:
                            piv, best = i, size
                if piv is None:
                    raise SingularMatrixError("matrix is singular", determinant=zero)
                aug[k], aug[piv] = aug[piv], aug[k]
            akk = aug[k][k]
            rk = aug[k]
            nzk = {j for j in range(width) if j != k and not _is_zero(rk[j])}
            for i in range(n):
                if i == k:
                    continue
                ri = aug[i]
                aik = ri[k]
                new = []
                for j in range(width):
                    if j == k:
                        new.append(zero)
                        continue
                    v = ri[j] * akk if not _is_zero(ri[j]) else zero
                    if not _is_zero(aik) and j in nzk:
                        v = v - aik * rk[j]
                    if prev is not None and not _is_zero(v):
                        v = _divexact(v, prev)
                    new.append(v)
                aug[i] = new
            prev = akk
        d = aug[0][0]
        for i in range(1, n):
            if aug[i][i] != d:
                raise ArithmeticError("fraction-free Gauss-Jordan lost diagonal consistency")
        return ExactMatrix([r[n:] for r in aug], zero=zero), d


class RatFunc:
    """Quotient of two polynomials, kept unreduced except for exact cancellation."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly):
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            den = MPoly.const(den.nvars, 1)
        elif not den.is_constant():
            try:
                num, den = num.divexact(den), MPoly.const(den.nvars, 1)
            except NotDivisibleError:
                pass
        if den.is_constant() and not den == 1:
            num, den = num / den.constant_term(), MPoly.const(den.nvars, 1)
        self.num, self.den = num, den

    def is_polynomial(self) -> bool:
        return self.den == 1

    def as_poly(self) -> MPoly:
        if not self.is_polynomial():
            raise NotDivisibleError(f"not a polynomial: ({self.num})/({self.den})")
        return self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num * other.den == other.num * self.den
        if isinstance(other, MPoly):
            return self.num == other * self.den
        return self.num == self.den * nf(other)

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other if isinstance(other, MPoly) else MPoly.const(self.num.nvars, other),
                            MPoly.const(self.num.nvars, 1))
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self.num * other.num, self.den * other.den)
        return RatFunc(self.num * other, self.den)

    __rmul__ = __mul__

    def __repr__(self):
        if self.is_polynomial():
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num}) / ({self.den}))"


def mat_inverse(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse.

    Over Q(sqrt3, sqrt5) the result has ``NFElem`` entries.  Over a
    polynomial ring the entries are :class:`RatFunc` (already reduced to
    polynomials wherever the determinant divides exactly).
    """
    if not m.is_square():
        raise SingularMatrixError("only square matrices can be inverted")
    if m.rows and isinstance(m.zero, MPoly):
        adj, d = m.adjugate_det()
        if not d:
            raise SingularMatrixError("determinant vanishes", determinant=d)
        if d.is_constant():
            inv = d.constant_term().inverse()
            return adj.map(lambda x: x * inv)
        return ExactMatrix([[RatFunc(x, d) for x in r] for r in adj.entries],
                           zero=RatFunc(MPoly.zero(d.nvars), MPoly.const(d.nvars, 1)))
    r, piv = rref(m.entries, augment=[[ONE if i == j else ZERO for j in range(m.rows)]
                                      for i in range(m.rows)])
    if len(piv) < m.rows:
        raise SingularMatrixError("matrix is singular", determinant=ZERO)
    return ExactMatrix([row[m.cols:] for row in r], zero=ZERO)


# -- linear algebra over the field -------------------------------------------


def rref(rows: Sequence[Sequence[NFElem]], augment: Sequence[Sequence[NFElem]] | None = None,
         ncols: int | None = None) -> tuple[list[list[NFElem]], list[int]]:
    """Reduced row echelon form over Q(sqrt3, sqrt5).

    Pivot search is restricted to the first ``ncols`` columns (default: the
    non-augmented part).  Returns the reduced rows and pivot columns.
    """
    m = [list(r) for r in rows]
    if augment is not None:
        m = [r + list(a) for r, a in zip(m, augment)]
    nrows = len(m)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    width = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv if x else x for x in m[r]]
        pr = m[r]
        nz = [j for j in range(width) if pr[j]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                ri = m[i]
                for j in nz:
                    ri[j] = ri[j] - f * pr[j]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m: ExactMatrix | Sequence[Sequence[NFElem]]) -> int:
    rows = m.entries if isinstance(m, ExactMatrix) else m
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(m: ExactMatrix | Sequence[Sequence[NFElem]]) -> list[list[NFElem]]:
    """Basis of the right null space, one vector per free column."""
    rows = m.entries if isinstance(m, ExactMatrix) else [list(r) for r in m]
    ncols = len(rows[0])
    r, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(piv):
            v[pc] = -r[i][fc]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence[NFElem]], b: Sequence[NFElem]) -> list[NFElem] | None:
    """One solution of ``a x = b`` (free variables set to zero), or ``None``."""
    ncols = len(a[0])
    r, piv = rref(a, augment=[[x] for x in b], ncols=ncols)
    for row in r[len(piv):]:
        if row[ncols]:
            return None
    x = [ZERO] * ncols
    for i, pc in enumerate(piv):
        x[pc] = r[i][ncols]
    return x
