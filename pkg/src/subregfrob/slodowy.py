"""Slodowy slice coordinates, adjoint invariants and the hypersurface N.

Slice points are ``e + sum_i z_i X^i_{-eta_i}`` with ``z_i`` of weight
``2 eta_i + 2``.  The invariants come from the characteristic polynomial of
the 8x8 slice matrix; the Pfaffian is recovered as an exact square root of its
constant coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .exact import ExactMatrix, MPoly, NFElem, QuotientRing, mat_inverse, nf, rank
from .exact.nf import ONE, ZERO
from .lie import ModuleBasis

__all__ = [
    "HypersurfaceN",
    "SliceChart",
    "SlodowyError",
    "build_hypersurface",
    "invariant_polys",
    "milnor_number",
    "normalize_slodowy",
    "slice_element",
]


class SlodowyError(ArithmeticError):
    pass


def slice_weights(mb: ModuleBasis) -> list[int]:
    return [2 * eta + 2 for eta in mb.weights]


def slice_element(mb: ModuleBasis, zvars: Sequence[MPoly] | None = None) -> ExactMatrix:
    """The generic point ``e + sum z_i X^i_{-eta_i}`` as a matrix of polynomials."""
    n = len(mb.weights)
    if zvars is None:
        zvars = [MPoly.var(n, i) for i in range(n)]
    nv = zvars[0].nvars
    zero = MPoly.zero(nv)
    e = mb.triple.e
    size = e.rows
    out = [[MPoly.const(nv, e[r, c]) if e[r, c] else zero for c in range(size)] for r in range(size)]
    for i, z in enumerate(zvars, start=1):
        x = mb[(i, -mb.eta(i))]
        for r in range(size):
            for c in range(size):
                if x[r, c]:
                    out[r][c] = out[r][c] + z * x[r, c]
    return ExactMatrix(out, zero=zero)


@dataclass
class Invariants:
    charpoly: list[MPoly]  # det(P - z) = sum c_k P^(n-k)
    basic: list[MPoly]     # quasihomogeneous generators restricted to the slice
    pfaffian: MPoly


def invariant_polys(mb: ModuleBasis, slice_matrix: ExactMatrix | None = None) -> Invariants:
    """Even charpoly coefficients of degree < n, plus the Pfaffian from ``c_n``.

    For D4 the generators come out in weights 4, 8, 8, 12.
    """
    m = slice_matrix if slice_matrix is not None else slice_element(mb)
    cp = m.charpoly()
    n = m.rows
    odd = [k for k in range(1, n + 1, 2) if cp[k]]
    if odd:
        raise SlodowyError(f"odd characteristic coefficients {odd} do not vanish")
    pf = cp[n].sqrt()
    if pf is None:
        raise SlodowyError("constant characteristic coefficient is not a perfect square")
    basic = [cp[k] for k in range(2, n, 2)] + [pf]
    return Invariants(cp, basic, pf)


def _linear_part(p: MPoly) -> dict[int, NFElem]:
    out = {}
    for e, c in p.terms.items():
        if sum(e) == 1:
            out[e.index(1)] = c
    return out


def _invert_triangular(images: Sequence[MPoly], weights: Sequence[int]) -> list[MPoly]:
    """Inverse of ``t = z + N(z)`` where ``N_j`` only involves lighter variables."""
    n = len(images)
    ident = [MPoly.var(n, i) for i in range(n)]
    nonlin = [images[i] - ident[i] for i in range(n)]
    z = list(ident)
    for _ in range(len(set(weights)) + 1):
        z = [ident[i] - nonlin[i].subs(z) for i in range(n)]
    if any(images[i].subs(z) != ident[i] for i in range(n)):
        raise SlodowyError("coordinate change is not triangular in the weight order")
    return z


@dataclass
class SliceChart:
    """Slodowy coordinates ``t_i(z)``, their inverse ``z_i(t)`` and ``t_0(t)``."""

    weights: list[int]
    t_of_z: list[MPoly]
    z_of_t: list[MPoly]
    t0: MPoly
    t0_scale: NFElem  # t0 = scale * (charpoly coefficient)
    invariants: Invariants

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def quasihomogeneity_defects(self) -> list[int]:
        return [i + 1 for i, p in enumerate(self.t_of_z)
                if not p.is_quasihomogeneous(self.weights, self.weights[i])]

    def singular_fiber(self, keep: Sequence[int]) -> MPoly:
        """``t0`` with every variable outside ``keep`` (0-based) set to zero."""
        return self.t0.partial_evaluate({i: 0 for i in range(self.nvars) if i not in keep})


def normalize_slodowy(mb: ModuleBasis, inv: Invariants, anchor: tuple[tuple[int, ...], object] | None = None
                      ) -> SliceChart:
    """Triangular quasihomogeneous coordinates ``t_i = z_i + nonlinear``.

    Invariants whose weight matches a coordinate are combined so that their
    linear parts become single ``z_i`` (a square solve per weight); the
    remaining coordinates are kept as ``z_i``.  The top-degree invariant is
    scaled so the ``anchor`` monomial (default ``t_{r+2}^2``) has coefficient
    ``anchor`` value (default -27).
    """
    w = slice_weights(mb)
    n = len(w)
    top_w = 2 * mb.eta0 + 2
    t_of_z: list[MPoly | None] = [None] * n
    groups: dict[int, list[MPoly]] = {}
    for p in inv.basic:
        if p.is_quasihomogeneous(w, None):
            degs = p.weighted_degrees(w)
            (deg,) = degs
            if deg != top_w:
                groups.setdefault(deg, []).append(p)
    for deg, polys in groups.items():
        lins = [_linear_part(p) for p in polys]
        cols = sorted({j for l in lins for j in l})
        if len(cols) != len(polys):
            raise SlodowyError(f"weight {deg}: {len(polys)} invariants but linear variables {cols}")
        mat = ExactMatrix([[l.get(j, ZERO) for j in cols] for l in lins], zero=ZERO)
        if rank(mat) != len(cols):
            raise SlodowyError(f"weight {deg}: linear parts are not independent")
        inv_m = mat_inverse(mat)
        # t_{cols[k]} = sum_a inv[k, a] * poly_a has linear part z_{cols[k]}
        for k, j in enumerate(cols):
            acc = MPoly.zero(n)
            for a, p in enumerate(polys):
                c = inv_m[k, a]
                if c:
                    acc = acc + p * c
            t_of_z[j] = acc
    for j in range(n):
        if t_of_z[j] is None:
            t_of_z[j] = MPoly.var(n, j)
    z_of_t = _invert_triangular(t_of_z, w)
    top = [p for p in inv.basic if p.weighted_degrees(w) == {top_w}]
    if len(top) != 1:
        raise SlodowyError(f"expected one invariant of weight {top_w}, found {len(top)}")
    t0_raw = top[0].subs(z_of_t)
    if anchor is None:
        exps = [0] * n
        exps[n - 1] = 2
        anchor = (tuple(exps), -27)
    mono, value = anchor
    c = t0_raw.coefficient(mono)
    if not c:
        raise SlodowyError(f"anchor monomial {mono} absent from the top invariant")
    scale = nf(value) / c
    return SliceChart(w, t_of_z, z_of_t, t0_raw * scale, scale, inv)


@dataclass
class HypersurfaceN:
    """N = {dt0/dt_{r+2} = dt0/dt_{r+1} = 0} with ``t_{r+1} = Z`` and ``t_{r+2} = 0``."""

    chart: SliceChart
    d_last: MPoly       # dt0/dt_{r+2}
    d_mid: MPoly        # dt0/dt_{r+1}
    ring: QuotientRing  # Z^2 = p1 Z + p0 over t_1..t_r
    z_index: int        # 0-based index of the coordinate replaced by Z
    zero_index: int     # 0-based index set to zero

    def restrict(self, p: MPoly):
        """Image of a slice polynomial in the quotient ring of N."""
        r = self.ring.nvars
        ring = self.ring
        p = p.partial_evaluate({self.zero_index: 0})
        out = ring.zero()
        zpow = [ring.one()]
        for exps, c in p.items():
            ez = exps[self.z_index]
            while len(zpow) <= ez:
                zpow.append(zpow[-1] * ring.Z)
            base = MPoly.from_terms(r, {tuple(exps[:r]): c})
            out = out + zpow[ez] * base
        return out

    def branch_ok(self) -> bool:
        return self.restrict(self.d_mid).is_zero() and self.restrict(self.d_last).is_zero()


def build_hypersurface(chart: SliceChart, rank_r: int) -> HypersurfaceN:
    n = chart.nvars
    last, mid = n - 1, n - 2
    d_last = chart.t0.diff(last)
    d_mid = chart.t0.diff(mid)
    if d_last.degree_in(last) != 1 or any(e[last] != 1 for e in d_last.terms):
        raise SlodowyError("dt0/dt_last is not a multiple of t_last")
    d_mid0 = d_mid.partial_evaluate({last: 0})
    if d_mid0.degree_in(mid) != 2:
        raise SlodowyError(f"dt0/dt_mid has degree {d_mid0.degree_in(mid)} in t_mid, expected 2")
    keep = list(range(rank_r))
    proj = list(range(rank_r)) + [0, 0]

    def coeff(k):
        c = d_mid0.coefficient_in(mid, k)
        if c.variables() - set(keep):
            raise SlodowyError("hypersurface coefficients depend on eliminated coordinates")
        return c.embed(rank_r, proj)

    a2, a1, a0 = coeff(2), coeff(1), coeff(0)
    if not a2.is_constant():
        raise SlodowyError("leading coefficient in t_mid is not constant")
    lead = a2.constant_term().inverse()
    p1 = -(a1 * lead)
    p0 = -(a0 * lead)
    names = [f"t{i + 1}" for i in keep]
    ring = QuotientRing(p1, p0, names=names, zname="Z")
    hn = HypersurfaceN(chart, d_last, d_mid, ring, mid, last)
    if not hn.branch_ok():
        raise SlodowyError("Z does not solve the hypersurface equations")
    return hn


def milnor_number(f: MPoly, weights: Sequence[int], max_degree: int | None = None) -> int:
    """Dimension of K[x]/(df) for a quasihomogeneous isolated singularity.

    Works degree by degree in the weighted grading: the Jacobian ideal is
    homogeneous, so its truncation to weighted degree <= D is spanned by
    ``monomial * df/dx_i`` of weighted degree <= D.  ``max_degree`` defaults to
    twice the Hessian degree, and the count must already be stable there.
    """
    n = f.nvars
    (deg,) = f.weighted_degrees(weights)
    hess = sum(deg - 2 * w for w in weights)
    top = max_degree or 2 * hess + max(weights)
    grads = [f.diff(i) for i in range(n)]
    bound = [top // w for w in weights]
    monos = [e for e in product(*(range(b + 1) for b in bound))
             if sum(a * w for a, w in zip(e, weights)) <= top]
    monos.sort(key=lambda e: (sum(a * w for a, w in zip(e, weights)), e))
    col = {e: k for k, e in enumerate(monos)}
    rows = []
    for g in grads:
        if not g:
            continue
        (gd,) = g.weighted_degrees(weights)
        for e in monos:
            if sum(a * w for a, w in zip(e, weights)) + gd <= top:
                p = g * MPoly.from_terms(n, {e: 1})
                row = [ZERO] * len(monos)
                for ex, c in p.terms.items():
                    row[col[ex]] = c
                rows.append(row)
    jdim = rank(rows) if rows else 0
    quot = len(monos) - jdim
    # stability: every monomial of weighted degree above the Hessian degree lies in J
    high = [e for e in monos if sum(a * w for a, w in zip(e, weights)) > hess]
    if high:
        sub = rows + [[ONE if col[e] == k else ZERO for k in range(len(monos))] for e in high]
        if rank(sub) != jdim:
            raise SlodowyError("Jacobian ideal does not contain all monomials above the Hessian degree")
    return quot
