"""Flat pencil on N, flat coordinates, the Frobenius potential and WDVV.

All tensors live in the quotient ring ``K[s][Z]/(Z^2 - p1 Z - p0)``;
contravariant Christoffel symbols are indexed ``G[i][j][k] = Gamma^{ij}_k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import ExactMatrix, MPoly, NFElem, QElem, QuotientRing, mat_inverse, nf, solve
from .exact.nf import ZERO
from .poisson import ReducedStructure
from .slodowy import _invert_triangular

__all__ = [
    "FlatCoordinates",
    "FlatPencil",
    "FrobeniusError",
    "PencilReport",
    "PotentialData",
    "WDVVReport",
    "assemble_pencil",
    "curvature",
    "flat_coordinates",
    "point_algebra_check",
    "reconstruct_potential",
    "verify_pencil",
    "verify_wdvv",
]


class FrobeniusError(ArithmeticError):
    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


def _monomials(nvars: int, weights: Sequence[int], target: int, allowed: Sequence[int]):
    out = []
    maxdeg = target // min(weights[v] for v in allowed) if allowed else 0
    for deg in range(2, maxdeg + 1):
        for combo in itertools.combinations_with_replacement(allowed, deg):
            if sum(weights[v] for v in combo) == target:
                e = [0] * nvars
                for v in combo:
                    e[v] += 1
                out.append(tuple(e))
    return out


@dataclass
class FlatCoordinates:
    s_of_t: list[MPoly]
    t_of_s: list[MPoly]
    eta_up: ExactMatrix  # constant g1 in s coordinates
    weights: list[int]


def flat_coordinates(red: ReducedStructure, weights: Sequence[int], exponents: Sequence[int],
                     kappa: int, unity: int) -> FlatCoordinates:
    """Quasihomogeneous ``s_i = t_i + T_i`` making ``g1 = d g / d t_unity`` constant.

    ``T_i`` runs over monomials of weight ``w_i`` in strictly lighter
    variables.  Nonzero constant entries are allowed only where
    ``eta_i + eta_j = kappa + 1``.  The equations turn out linear in the
    unknown coefficients; that is checked, not assumed.
    """
    r = red.r
    g1 = red.unity_derivative(unity)
    for i in range(r):
        for j in range(r):
            if not g1[i][j].is_polynomial():
                raise FrobeniusError(f"g1^{i + 1}{j + 1} involves Z", g1[i][j])
    g1p = [[g1[i][j].a for j in range(r)] for i in range(r)]
    unknowns = []
    for i in range(r):
        lighter = [v for v in range(r) if weights[v] < weights[i]]
        for e in _monomials(r, weights, weights[i], lighter):
            unknowns.append((i, e))
    nu = len(unknowns)
    nv = r + nu
    X = [MPoly.var(nv, k) for k in range(nv)]
    S = []
    for i in range(r):
        p = X[i]
        for k, (ii, e) in enumerate(unknowns):
            if ii == i:
                p = p + X[r + k] * MPoly.from_terms(nv, {e + (0,) * nu: 1})
        S.append(p)
    J = [[S[i].diff(a) for a in range(r)] for i in range(r)]
    ge = [[g1p[a][b].embed(nv, list(range(r))) for b in range(r)] for a in range(r)]
    rows, rhs = [], []
    for i in range(r):
        for j in range(i, r):
            p = MPoly.zero(nv)
            for a in range(r):
                for b in range(r):
                    if J[i][a] and J[j][b] and ge[a][b]:
                        p = p + J[i][a] * J[j][b] * ge[a][b]
            groups: dict[tuple, dict[tuple, NFElem]] = {}
            for e, c in p.terms.items():
                groups.setdefault(e[:r], {})[e[r:]] = c
            for te, cs in groups.items():
                if sum(te) == 0 and exponents[i] + exponents[j] == kappa + 1:
                    continue
                row, b = [ZERO] * nu, ZERO
                for ue, c in cs.items():
                    deg = sum(ue)
                    if deg == 0:
                        b = b - c
                    elif deg == 1:
                        row[ue.index(1)] = row[ue.index(1)] + c
                    else:
                        raise FrobeniusError("flat-coordinate ansatz is not linear")
                rows.append(row)
                rhs.append(b)
    sol = solve(rows, rhs) if nu else []
    if sol is None:
        raise FrobeniusError("no quasihomogeneous flat coordinates of the triangular form")
    s_of_t = []
    for i in range(r):
        p = MPoly.var(r, i)
        for k, (ii, e) in enumerate(unknowns):
            if ii == i and sol[k]:
                p = p + MPoly.from_terms(r, {e: sol[k]})
        s_of_t.append(p)
    t_of_s = _invert_triangular(s_of_t, weights)
    Jt = [[s_of_t[i].diff(a) for a in range(r)] for i in range(r)]
    eta = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = MPoly.zero(r)
            for a in range(r):
                for b in range(r):
                    if Jt[i][a] and Jt[j][b] and g1p[a][b]:
                        acc = acc + Jt[i][a] * Jt[j][b] * g1p[a][b]
            if not acc.is_constant():
                raise FrobeniusError(f"g1^{i + 1}{j + 1} is not constant in flat coordinates", acc)
            row.append(acc.constant_term())
        eta.append(row)
    return FlatCoordinates(s_of_t, t_of_s, ExactMatrix(eta, zero=ZERO), list(weights))


@dataclass
class FlatPencil:
    ring: QuotientRing
    g2: list[list[QElem]]
    g1: list[list[QElem]]
    G2: list[list[list[QElem]]]
    G1: list[list[list[QElem]]]
    tau: MPoly
    E: list[QElem]
    e: list[QElem]
    flat: FlatCoordinates
    unity: int
    kappa: int
    exponents: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.g2)

    @property
    def charge(self) -> Fraction:
        return Fraction(self.kappa - 1, self.kappa + 1)

    @property
    def degrees(self) -> list[Fraction]:
        return [Fraction(eta + 1, self.kappa + 1) for eta in self.exponents]

    def metric(self, lam) -> list[list[QElem]]:
        lam = nf(lam)
        return [[self.g2[i][j] + self.g1[i][j] * lam for j in range(self.r)] for i in range(self.r)]

    def christoffel(self, lam) -> list[list[list[QElem]]]:
        lam = nf(lam)
        r = self.r
        return [[[self.G2[i][j][k] + self.G1[i][j][k] * lam for k in range(r)]
                 for j in range(r)] for i in range(r)]


def assemble_pencil(red: ReducedStructure, fc: FlatCoordinates, kappa: int, exponents: Sequence[int],
                    unity: int) -> FlatPencil:
    """Rewrite g and Gamma of N in flat coordinates and split off the unity derivative."""
    ring_t = red.hyper.ring
    r = red.r
    names = [f"s{i + 1}" for i in range(r)]
    ring_s = ring_t.substitute(fc.t_of_s, names=names)
    move = lambda q: ring_s.transport(q, fc.t_of_s)  # noqa: E731
    J = [[fc.s_of_t[i].diff(a) for a in range(r)] for i in range(r)]
    H = [[[fc.s_of_t[j].diff(b).diff(c) for c in range(r)] for b in range(r)] for j in range(r)]
    Jinv = [[fc.t_of_s[c].diff(k) for k in range(r)] for c in range(r)]
    zt = ring_t.zero()
    g2 = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = zt
            for a in range(r):
                for b in range(r):
                    if J[i][a] and J[j][b]:
                        acc = acc + red.g[a][b] * (J[i][a] * J[j][b])
            row.append(move(acc))
        g2.append(row)
    G2 = [[[None] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            inner = []
            for c in range(r):
                acc = zt
                for a in range(r):
                    if not J[i][a]:
                        continue
                    for b in range(r):
                        if H[j][b][c]:
                            acc = acc + red.g[a][b] * (J[i][a] * H[j][b][c])
                        if J[j][b]:
                            acc = acc + red.G[a][b][c] * (J[i][a] * J[j][b])
                inner.append(move(acc))
            for k in range(r):
                acc = ring_s.zero()
                for c in range(r):
                    if Jinv[c][k]:
                        acc = acc + inner[c] * Jinv[c][k]
                G2[i][j][k] = acc
    g1 = [[x.diff(unity) for x in row] for row in g2]
    G1 = [[[x.diff(unity) for x in a] for a in row] for row in G2]
    tau = MPoly.var(r, 0) * nf(Fraction(1, kappa + 1))
    tau_s = tau.subs(fc.t_of_s)
    dtau = [ring_s.poly(tau_s.diff(k)) for k in range(r)]
    E = [sum((g2[i][k] * dtau[k] for k in range(r)), ring_s.zero()) for i in range(r)]
    e = [sum((g1[i][k] * dtau[k] for k in range(r)), ring_s.zero()) for i in range(r)]
    return FlatPencil(ring_s, g2, g1, G2, G1, tau_s, E, e, fc, unity, kappa, tuple(exponents))


def _const(x: QElem) -> NFElem | None:
    if x.is_zero():
        return ZERO
    return x.constant_value() if x.is_constant() else None


def _lie_vec(X, Y, r):
    return [sum((X[k] * Y[i].diff(k) - Y[k] * X[i].diff(k) for k in range(r)), X[0].ring.zero())
            for i in range(r)]


def _lie_metric(X, g, r):
    """Lie derivative of a contravariant 2-tensor along X."""
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = sum((X[k] * g[i][j].diff(k) for k in range(r)), X[0].ring.zero())
            for k in range(r):
                acc = acc - X[i].diff(k) * g[k][j] - X[j].diff(k) * g[i][k]
            row.append(acc)
        out.append(row)
    return out


@dataclass
class PencilReport:
    bracket_ok: bool
    lie_E_g2_ok: bool
    lie_e_g2_ok: bool
    lie_e_g1_ok: bool
    g1_constant_antidiagonal: bool
    G1_vanishes: bool
    euler_degrees: list[NFElem]
    unity_vector: list[NFElem]
    R: list[list[NFElem]]
    R_invertible: bool
    residuals: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.bracket_ok and self.lie_E_g2_ok and self.lie_e_g2_ok and self.lie_e_g1_ok
                and self.R_invertible and self.g1_constant_antidiagonal and self.G1_vanishes)


def verify_pencil(p: FlatPencil) -> PencilReport:
    r = p.r
    bracket = _lie_vec(p.e, p.E, r)
    bracket_ok = all(bracket[i] == p.e[i] for i in range(r))
    dm1 = nf(p.charge - 1)
    LE = _lie_metric(p.E, p.g2, r)
    lie_E = all(LE[i][j] == p.g2[i][j] * dm1 for i in range(r) for j in range(r))
    Le2 = _lie_metric(p.e, p.g2, r)
    lie_e2 = all(Le2[i][j] == p.g1[i][j] for i in range(r) for j in range(r))
    Le1 = _lie_metric(p.e, p.g1, r)
    lie_e1 = all(x.is_zero() for row in Le1 for x in row)
    const = all(_const(x) is not None for row in p.g1 for x in row)
    antidiag = const and all(
        p.g1[i][j].is_zero() for i in range(r) for j in range(r)
        if p.exponents[i] + p.exponents[j] != p.kappa + 1)
    g1_vanish = all(x.is_zero() for a in p.G1 for b in a for x in b)
    # E = sum d_i s_i d/ds_i and e = d/ds_unity, read off exactly
    degs, unit = [], []
    for i in range(r):
        unit_exp = tuple(1 if k == i else 0 for k in range(r))
        Ei = p.E[i]
        di = Ei.a.coefficient(unit_exp) if Ei.is_polynomial() else None
        if di is None or Ei != p.ring.var(i) * di:
            di = None
        degs.append(di)
        unit.append(_const(p.e[i]))
    # R = (d - 1)/2 + nabla_1 E; Gamma_1 = 0 in flat coordinates so nabla_1 = d
    R = []
    for i in range(r):
        row = []
        for j in range(r):
            x = p.E[j].diff(i) + (nf((p.charge - 1) / 2) if i == j else 0)
            row.append(_const(x))
        R.append(row)
    R_ok = all(v is not None for row in R for v in row) and \
        ExactMatrix(R, zero=ZERO).det() != 0
    return PencilReport(bracket_ok, lie_E, lie_e2, lie_e1, antidiag, g1_vanish, degs, unit, R, R_ok)


def curvature(g: list[list[QElem]], G: list[list[list[QElem]]]) -> dict[tuple, QElem]:
    """Nonzero components of the contravariant curvature tensor.

    ``R^{ijk}_l = g^{is}(d_s G^{jk}_l - d_l G^{jk}_s) + G^{ij}_s G^{sk}_l - G^{ik}_s G^{sj}_l``.
    """
    r = len(g)
    zero = g[0][0] * 0
    dG = [[[[G[j][k][l].diff(s) for s in range(r)] for l in range(r)] for k in range(r)] for j in range(r)]
    out = {}
    for i, j, k, l in itertools.product(range(r), repeat=4):
        acc = zero
        for s in range(r):
            if g[i][s]:
                diffs = dG[j][k][l][s] - dG[j][k][s][l]
                if diffs:
                    acc = acc + g[i][s] * diffs
            if G[i][j][s] and G[s][k][l]:
                acc = acc + G[i][j][s] * G[s][k][l]
            if G[i][k][s] and G[s][j][l]:
                acc = acc - G[i][k][s] * G[s][j][l]
        if acc:
            out[(i, j, k, l)] = acc
    return out


@dataclass
class PotentialData:
    ring: QuotientRing
    F: QElem
    eta_up: ExactMatrix
    eta_low: ExactMatrix
    degrees: list[Fraction]
    charge: Fraction
    unity: int
    third: dict[tuple[int, int, int], QElem] = field(default_factory=dict)

    def c(self, i, j, k) -> QElem:
        key = tuple(sorted((i, j, k)))
        if key not in self.third:
            self.third[key] = self.F.diff(key[0]).diff(key[1]).diff(key[2])
        return self.third[key]

    @property
    def r(self) -> int:
        return self.ring.nvars


def reconstruct_potential(p: FlatPencil) -> PotentialData:
    """Invert ``g2^{ij} = (d - 1 + d_i + d_j) eta^{ia} eta^{jb} F_ab`` and integrate.

    Integration uses the Euler identity twice: ``F_j = sum d_i s_i F_ij / (D - d_j)``
    and ``F = sum d_j s_j F_j / D`` with ``D = 3 - d``; the Hessian is then
    checked against the result.
    """
    r = p.r
    ring = p.ring
    vals = [[_const(x) for x in row] for row in p.g1]
    if any(v is None for row in vals for v in row):
        raise FrobeniusError("g1 is not constant in flat coordinates")
    eta_up = ExactMatrix(vals, zero=ZERO)
    eta_low = mat_inverse(eta_up)
    d = p.charge
    dd = p.degrees
    big_d = 3 - d
    for i in range(r):
        for j in range(r):
            if d - 1 + dd[i] + dd[j] == 0:
                raise FrobeniusError(f"degree sum vanishes for ({i + 1}, {j + 1})")
    scaled = [[p.g2[i][j] / nf(d - 1 + dd[i] + dd[j]) for j in range(r)] for i in range(r)]
    H = [[None] * r for _ in range(r)]
    for a in range(r):
        for b in range(r):
            acc = ring.zero()
            for i in range(r):
                if not eta_low[a, i]:
                    continue
                for j in range(r):
                    if eta_low[b, j]:
                        acc = acc + scaled[i][j] * (eta_low[a, i] * eta_low[b, j])
            H[a][b] = acc
    s = [ring.var(i) for i in range(r)]
    dF = []
    for j in range(r):
        acc = ring.zero()
        for i in range(r):
            acc = acc + s[i] * H[i][j] * nf(dd[i])
        dF.append(acc / nf(big_d - dd[j]))
    F = ring.zero()
    for j in range(r):
        F = F + s[j] * dF[j] * nf(dd[j])
    F = F / nf(big_d)
    bad = [(a, b) for a in range(r) for b in range(r) if F.diff(a).diff(b) != H[a][b]]
    if bad:
        raise FrobeniusError(f"Hessian is not integrable at {bad[:3]}")
    return PotentialData(ring, F, eta_up, eta_low, dd, d, p.unity)


@dataclass
class WDVVReport:
    residuals: dict[tuple[int, int, int, int], QElem]
    checked: int
    unity_ok: bool
    quasihomogeneous: bool
    eta_constant_antidiagonal: bool
    algebraic: bool

    @property
    def ok(self) -> bool:
        return (not self.residuals and self.unity_ok and self.quasihomogeneous
                and self.eta_constant_antidiagonal and self.algebraic)


def verify_wdvv(pd: PotentialData, exponents: Sequence[int] | None = None, kappa: int | None = None) -> WDVVReport:
    r = pd.r
    ring = pd.ring
    eu = pd.eta_up
    # A[i][j][q] = c_{ijk} eta^{kq}
    A = [[[sum((pd.c(i, j, k) * eu[k, q] for k in range(r) if eu[k, q]), ring.zero())
           for q in range(r)] for j in range(r)] for i in range(r)]
    res = {}
    count = 0
    for i, j, q, n in itertools.product(range(r), repeat=4):
        count += 1
        lhs = sum((A[i][j][p] * pd.c(p, q, n) for p in range(r)), ring.zero())
        rhs = sum((A[n][j][p] * pd.c(p, q, i) for p in range(r)), ring.zero())
        diff = lhs - rhs
        if diff:
            res[(i, j, q, n)] = diff
    unity_ok = all(pd.c(pd.unity, i, j) == pd.eta_low[i, j] for i in range(r) for j in range(r))
    s = [ring.var(i) for i in range(r)]
    euler = sum((s[i] * pd.F.diff(i) * nf(pd.degrees[i]) for i in range(r)), ring.zero())
    quasi = euler == pd.F * nf(3 - pd.charge)
    anti = True
    if exponents is not None and kappa is not None:
        anti = all(not pd.eta_low[i, j] for i in range(r) for j in range(r)
                   if exponents[i] + exponents[j] != kappa + 1)
    third_const = all(_const(pd.c(pd.unity, i, j)) is not None for i in range(r) for j in range(r))
    return WDVVReport(res, count, unity_ok, quasi, anti and third_const, not pd.F.b.is_zero())


def point_algebra_check(pd: PotentialData, point: Sequence, z) -> dict:
    """Evaluate ``C^k_ij`` at a point of N and test the algebra axioms by brute force."""
    r = pd.r
    c = {(i, j, k): pd.c(i, j, k).evaluate(point, z)
         for i, j, k in itertools.product(range(r), repeat=3)}
    el = pd.eta_low
    eu = mat_inverse(el)
    C = {(i, j, k): sum((eu[k, p] * c[(p, i, j)] for p in range(r)), ZERO)
         for i, j, k in itertools.product(range(r), repeat=3)}
    comm = all(C[(i, j, k)] == C[(j, i, k)] for i, j, k in itertools.product(range(r), repeat=3))
    assoc = True
    for a, b, cc, out in itertools.product(range(r), repeat=4):
        lhs = sum((C[(a, b, m)] * C[(m, cc, out)] for m in range(r)), ZERO)
        rhs = sum((C[(b, cc, m)] * C[(a, m, out)] for m in range(r)), ZERO)
        if lhs != rhs:
            assoc = False
            break
    unit = all(C[(pd.unity, i, k)] == (1 if i == k else 0) for i in range(r) for k in range(r))
    return {"commutative": comm, "associative": assoc, "unit": unit}
