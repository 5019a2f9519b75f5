"""Lie-Poisson data, finite Dirac reduction to the slice, and restriction to N.

Index conventions: positions ``0..m-1`` of the ordered dual basis are the
slice directions (Latin), the rest are transverse (Greek).  Contravariant
Christoffel symbols are stored as ``G[i][j][k]`` for ``Gamma^{ij}_k``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .exact import ExactMatrix, MPoly, NFElem, QElem, RatFunc, nf
from .exact.nf import ZERO
from .lie import OrderedDualBasis
from .slodowy import HypersurfaceN, SliceChart

__all__ = [
    "DiracError",
    "LiePoissonData",
    "ReducedStructure",
    "TransverseStructure",
    "change_to_t",
    "dirac_reduce",
    "lie_poisson",
    "neumann_inverse",
    "omega_block",
    "restrict_to_N",
    "w_identity_failures",
]


class DiracError(ArithmeticError):
    """Dirac reduction produced something the theory rules out."""

    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


def _mm(a: Sequence[Sequence], b: Sequence[Sequence], zero):
    out = []
    cols = len(b[0]) if b else 0
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        new = []
        for j in range(cols):
            acc = zero
            for k, x in nz:
                y = b[k][j]
                if y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


@dataclass
class LiePoissonData:
    """``Ft[I][J] = sum_K c^{IJ}_K <q, xi^K>`` on the slice, plus ``gram = <xi^I, xi^J>``."""

    dual: OrderedDualBasis
    m: int
    Ft: list[list[MPoly]]
    gram: list[list[NFElem]]
    offset: list[NFElem]

    @property
    def n(self) -> int:
        return len(self.Ft)

    def antisymmetric(self) -> bool:
        return all(self.Ft[i][j] == -self.Ft[j][i] for i in range(self.n) for j in range(i, self.n))


def lie_poisson(dual: OrderedDualBasis, e: ExactMatrix, m: int) -> LiePoissonData:
    """Lie-Poisson matrix restricted to ``e + span(xi_1..xi_m)``.

    The pairing ``<q, xi^K>`` is the slice coordinate ``z^K`` plus the
    constant ``<e, xi^K>``; without that constant the transverse block would
    be singular at ``e``.
    """
    n = dual.size
    offset = dual.pairing(e)
    q = [(MPoly.var(m, K) if K < m else MPoly.zero(m)) + MPoly.const(m, offset[K]) for K in range(n)]
    zero = MPoly.zero(m)
    Ft = [[zero] * n for _ in range(n)]
    for I in range(n):
        for J in range(n):
            acc = zero
            for K, c in dual.structure[I][J].items():
                if q[K]:
                    acc = acc + q[K] * c
            Ft[I][J] = acc
    gram = [[dual.gram[I, J] for J in range(n)] for I in range(n)]
    return LiePoissonData(dual, m, Ft, gram, offset)


def neumann_inverse(mat: ExactMatrix) -> ExactMatrix:
    """Inverse of ``F0 + F1(z)`` as ``sum_k (-F0^-1 F1)^k F0^-1`` (must terminate).

    Terminates when ``F0^-1 F1`` is nilpotent, which quasihomogeneity forces
    for the transverse block; used as an independent check of elimination.
    """
    from .exact import mat_inverse

    m = mat.zero.nvars
    origin = [0] * m
    f0 = ExactMatrix([[x.evaluate(origin) for x in r] for r in mat.entries], zero=ZERO)
    f0i = mat_inverse(f0)
    f0i_p = f0i.map(lambda x: MPoly.const(m, x))
    f1 = mat - f0.map(lambda x: MPoly.const(m, x))
    step = (f0i_p @ f1).scale(nf(-1))
    term = f0i_p
    total = f0i_p
    for _ in range(mat.rows * 8):
        term = step @ term
        if term.is_zero():
            return total
        total = total + term
    raise DiracError("graded Neumann series did not terminate")


@dataclass
class TransverseStructure:
    """F, g and Gamma on the slice (in z or t coordinates)."""

    F: list[list[MPoly]]
    g: list[list[MPoly]]
    G: list[list[list[MPoly]]]
    coords: str = "z"
    inverse_det: NFElem | None = None
    timings: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.F)

    def degree_failures(self, weights: Sequence[int]) -> list[str]:
        """Entries that are not quasihomogeneous of the expected weight."""
        w = weights
        bad = []
        for i in range(self.m):
            for j in range(self.m):
                if not self.g[i][j].is_quasihomogeneous(w, w[i] + w[j] - 4):
                    bad.append(f"g^{i + 1}{j + 1}")
                if not self.F[i][j].is_quasihomogeneous(w, w[i] + w[j] - 2):
                    bad.append(f"F^{i + 1}{j + 1}")
                for k in range(self.m):
                    if not self.G[i][j][k].is_quasihomogeneous(w, w[i] + w[j] - w[k] - 4):
                        bad.append(f"Gamma^{i + 1}{j + 1}_{k + 1}")
        return bad


def dirac_reduce(lp: LiePoissonData, route: str = "bareiss") -> TransverseStructure:
    """Finite Dirac reduction of the Lie-Poisson pencil to the slice.

    ``route`` selects how the transverse block is inverted: fraction-free
    Gauss-Jordan (``bareiss``) or the graded Neumann series (``neumann``).
    The inverse must come out polynomial.
    """
    m, n = lp.m, lp.n
    zero = MPoly.zero(m)
    lat, gre = range(m), range(m, n)
    block = ExactMatrix([[lp.Ft[a][b] for b in gre] for a in gre], zero=zero)
    t0 = time.perf_counter()
    det = None
    if route == "bareiss":
        adj, d = block.adjugate_det()
        if not d:
            raise DiracError("transverse block is singular on the slice")
        if d.is_constant():
            det = d.constant_term()
            inv = adj.map(lambda x: x * det.inverse())
        else:
            bad = [RatFunc(x, d) for r in adj.entries for x in r if x and not d.divides(x)]
            if bad:
                raise DiracError("inverse of the transverse block is not polynomial", bad[0])
            inv = adj.map(lambda x: x.divexact(d))
    elif route == "neumann":
        inv = neumann_inverse(block)
    else:
        raise ValueError(f"unknown route {route!r}")
    t_inv = time.perf_counter() - t0
    N = inv.entries
    Fib = [[lp.Ft[i][b] for b in gre] for i in lat]
    Faj = [[lp.Ft[a][j] for j in lat] for a in gre]
    c = lambda I, J: MPoly.const(m, lp.gram[I][J])  # noqa: E731
    P = _mm(Fib, N, zero)   # F^{i beta} F_{beta alpha}
    Q = _mm(N, Faj, zero)   # F_{beta phi} F^{phi j}
    PF = _mm(P, Faj, zero)
    F = [[lp.Ft[i][j] - PF[i][j] for j in lat] for i in lat]
    Ggg = [[c(a, b) for b in gre] for a in gre]
    Gig = [[c(i, b) for b in gre] for i in lat]
    Ggj = [[c(a, j) for j in lat] for a in gre]
    PG = _mm(P, Ggg, zero)
    A1, A2, A3 = _mm(Gig, Q, zero), _mm(P, Ggj, zero), _mm(PG, Q, zero)
    g = [[c(i, j) - A1[i][j] - A2[i][j] + A3[i][j] for j in lat] for i in lat]
    L = [[Gig[i][b] - PG[i][b] for b in range(n - m)] for i in lat]
    G = [[[zero] * m for _ in lat] for _ in lat]
    for k in lat:
        dQ = [[Q[b][j].diff(k) for j in lat] for b in range(n - m)]
        LdQ = _mm(L, dQ, zero)
        for i in lat:
            for j in lat:
                G[i][j][k] = -LdQ[i][j]
    timings = {"inverse": t_inv, "total": time.perf_counter() - t0}
    return TransverseStructure(F, g, G, "z", det, timings)


def change_to_t(ts: TransverseStructure, chart: SliceChart) -> TransverseStructure:
    """Tensor transformation to Slodowy coordinates.

    ``g`` and ``F`` transform as contravariant 2-tensors; the Christoffel
    symbols pick up the second-derivative term
    ``dt^i/dz^a d2t^j/dz^c dz^b g^{ab}`` before contracting with ``dz^c/dt^k``.
    """
    m = ts.m
    zero = MPoly.zero(m)
    T, Zt = chart.t_of_z, chart.z_of_t
    J = [[T[i].diff(a) for a in range(m)] for i in range(m)]
    H = [[[T[j].diff(b).diff(c) for c in range(m)] for b in range(m)] for j in range(m)]
    Jinv = [[Zt[c].diff(k) for k in range(m)] for c in range(m)]

    def tensor2(M):
        out = [[zero] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                acc = zero
                for a in range(m):
                    if not J[i][a]:
                        continue
                    for b in range(m):
                        if J[j][b] and M[a][b]:
                            acc = acc + J[i][a] * J[j][b] * M[a][b]
                out[i][j] = acc.subs(Zt)
        return out

    g, F = tensor2(ts.g), tensor2(ts.F)
    G = [[[zero] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            inner = []
            for c in range(m):
                acc = zero
                for a in range(m):
                    if not J[i][a]:
                        continue
                    for b in range(m):
                        if ts.g[a][b] and H[j][b][c]:
                            acc = acc + J[i][a] * H[j][b][c] * ts.g[a][b]
                        if J[j][b] and ts.G[a][b][c]:
                            acc = acc + J[i][a] * J[j][b] * ts.G[a][b][c]
                inner.append(acc.subs(Zt))
            for k in range(m):
                acc = zero
                for c in range(m):
                    if Jinv[c][k] and inner[c]:
                        acc = acc + inner[c] * Jinv[c][k]
                G[i][j][k] = acc
    return TransverseStructure(F, g, G, "t", ts.inverse_det, dict(ts.timings))


def w_identity_failures(ts: TransverseStructure, weights_eta: Sequence[int], tvars=None) -> list[str]:
    """Check ``g^{1j} = (eta_j + 1) t_j`` and ``Gamma^{1j}_k = eta_j delta^j_k``."""
    m = len(weights_eta)
    bad = []
    for j in range(m):
        tj = tvars[j] if tvars is not None else MPoly.var(ts.g[0][0].nvars, j)
        if ts.g[0][j] != tj * (weights_eta[j] + 1):
            bad.append(f"g^1{j + 1}")
        for k in range(m):
            want = weights_eta[j] if j == k else 0
            if ts.G[0][j][k] != MPoly.const(ts.g[0][0].nvars, want):
                bad.append(f"Gamma^1{j + 1}_{k + 1}")
    return bad


@dataclass
class OmegaReport:
    constant: NFElem | None
    zero_block_ok: bool
    omega_ok: bool

    @property
    def ok(self) -> bool:
        return self.zero_block_ok and self.omega_ok and self.constant is not None


def omega_matrix(t0: MPoly) -> list[list[MPoly]]:
    """The 3x3 matrix built from the derivatives of ``t0`` in its last three variables."""
    n = t0.nvars
    d4, d5, d6 = (t0.diff(n - 3), t0.diff(n - 2), t0.diff(n - 1))
    z = MPoly.zero(n)
    return [[z, d6, -d5], [-d6, z, d4], [d5, -d4, z]]


def omega_block(ts_t: TransverseStructure, t0: MPoly) -> OmegaReport:
    """``F(t) = c * [[0, 0], [0, Omega]]``; returns the constant ``c``."""
    m = ts_t.m
    k = m - 3
    zero_ok = all(not ts_t.F[i][j] for i in range(m) for j in range(m) if i < k or j < k)
    om = omega_matrix(t0)
    const = None
    for a in range(3):
        for b in range(3):
            if om[a][b] and ts_t.F[k + a][k + b]:
                lead, c0 = om[a][b].sorted_items()[0]
                const = ts_t.F[k + a][k + b].coefficient(lead) / c0
                break
        if const is not None:
            break
    om_ok = const is not None and all(
        ts_t.F[k + a][k + b] == om[a][b] * const for a in range(3) for b in range(3))
    return OmegaReport(const, zero_ok, om_ok)


def det_small(mat: Sequence[Sequence], zero):
    """Leibniz determinant; fine for the 4x4 quotient-ring matrices on N."""
    n = len(mat)
    total = zero
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = None
        for i, p in enumerate(perm):
            x = mat[i][p]
            if not x:
                term = None
                break
            term = x if term is None else term * x
        if term is not None:
            total = total + term if sign > 0 else total - term
    return total


@dataclass
class ReducedStructure:
    """g and Gamma on N (entries in the quotient ring), plus the Dirac-reduced F."""

    hyper: HypersurfaceN
    g: list[list[QElem]]
    G: list[list[list[QElem]]]
    Fhat_scaled: list[list[QElem]]  # pf^2 * F-hat, pf = F^{r+1, r+2}
    pf: QElem

    @property
    def r(self) -> int:
        return len(self.g)

    @property
    def fhat_vanishes(self) -> bool:
        return (not self.pf.is_zero() and self.hyper.ring.disc.sqrt() is None
                and all(x.is_zero() for row in self.Fhat_scaled for x in row))

    def levi_civita_failures(self) -> list[str]:
        r, g, G = self.r, self.g, self.G
        bad = []
        zero = self.hyper.ring.zero()
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    if g[i][j].diff(k) != G[i][j][k] + G[j][i][k]:
                        bad.append(f"compat {i + 1}{j + 1}{k + 1}")
                    lhs = sum((g[i][s] * G[j][k][s] for s in range(r)), zero)
                    rhs = sum((g[j][s] * G[i][k][s] for s in range(r)), zero)
                    if lhs != rhs:
                        bad.append(f"torsion {i + 1}{j + 1}{k + 1}")
        return bad

    def unity_derivative(self, unity: int) -> list[list[QElem]]:
        return [[x.diff(unity) for x in row] for row in self.g]

    def nondegeneracy_det(self, unity: int) -> QElem:
        return det_small(self.unity_derivative(unity), self.hyper.ring.zero())


def restrict_to_N(ts_t: TransverseStructure, hn: HypersurfaceN) -> ReducedStructure:
    """Put ``t_{r+2} = 0`` and ``t_{r+1} = Z`` into g and Gamma, and Dirac-reduce F.

    Gamma picks up the chain-rule term ``Gamma^{mn}_{r+1} dZ/dt_l`` because
    the restricted coordinate is a function on N.
    """
    ring = hn.ring
    r = ring.nvars
    zi = hn.z_index
    R = hn.restrict
    dZ = [ring.dZ(l) for l in range(r)]
    g = [[R(ts_t.g[i][j]) for j in range(r)] for i in range(r)]
    G = [[[R(ts_t.G[i][j][l]) + R(ts_t.G[i][j][zi]) * dZ[l] for l in range(r)]
          for j in range(r)] for i in range(r)]
    Fr = [[R(x) for x in row] for row in ts_t.F]
    a, b = zi, hn.zero_index
    pf = Fr[a][b]
    if not Fr[a][a].is_zero() or not Fr[b][b].is_zero():
        raise DiracError("constraint block of F is not antisymmetric")
    # x^2 F-hat = x^2 F^{mn} - F^{m.} adj(B) F^{.n}, B = [[0, x], [-x, 0]], adj(B) = [[0, -x], [x, 0]]
    Fs = []
    for mi in range(r):
        row = []
        for ni in range(r):
            corr = Fr[mi][b] * pf * Fr[a][ni] - Fr[mi][a] * pf * Fr[b][ni]
            row.append(Fr[mi][ni] * pf * pf - corr)
        Fs.append(row)
    return ReducedStructure(hn, g, G, Fs, pf)
