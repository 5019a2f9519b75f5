"""The opposite Cartan subalgebra ker ad(e + rho*a) and its normalized basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import SQRT3, SQRT5, ExactMatrix, NFElem, nf, nullspace, rank, solve, upoly
from .exact.nf import ZERO
from .lie import Label, ModuleBasis

__all__ = [
    "CartanError",
    "GoldReport",
    "OppositeCartan",
    "RHO_SEARCH",
    "cartan_basis",
    "certify_regular_semisimple",
    "find_cyclic_element",
    "opposite_cartan",
    "verify_gold_identity",
]

RHO_SEARCH = [nf(1), nf(-1), nf(2), nf(-2), nf(Fraction(1, 2)), nf(Fraction(-1, 2)),
              SQRT3, -SQRT3, SQRT5, -SQRT5]


class CartanError(ArithmeticError):
    pass


@dataclass
class RegularityCertificate:
    kernel_dim: int
    charpoly: list[NFElem]
    squarefree: list[NFElem]
    annihilates: bool

    @property
    def ok(self) -> bool:
        return self.annihilates


def certify_regular_semisimple(mb: ModuleBasis, y: ExactMatrix) -> RegularityCertificate:
    """Exact certificate: dim ker ad y = rank and ad y killed by a squarefree polynomial.

    The squarefree part of the characteristic polynomial annihilating ``ad y``
    means the minimal polynomial is squarefree, i.e. ``ad y`` is diagonalizable.
    """
    ad = mb.alg.ad_matrix(y)
    kdim = ad.cols - rank(ad)
    cp = list(reversed(ad.charpoly()))  # constant term first
    sf = upoly.squarefree_part(cp)
    kills = kdim == mb.rank and upoly.eval_at_matrix(sf, ad).is_zero()
    return RegularityCertificate(kdim, cp, sf, kills)


def cyclic_candidates(mb: ModuleBasis) -> list[Label]:
    """``X^{r-1}_{-kappa}`` first, then the other lowest-weight vectors of weight kappa."""
    k = mb.kappa
    main = (mb.rank - 1, -k)
    others = [(i, -k) for i in range(1, len(mb.weights) + 1)
              if mb.eta(i) == k and (i, -k) != main]
    return [main] + others


def find_cyclic_element(mb: ModuleBasis, label: Label | None = None,
                        rhos=None) -> tuple[NFElem, ExactMatrix, RegularityCertificate]:
    """First ``rho`` in the search set making ``e + rho*a`` regular semisimple."""
    label = label or cyclic_candidates(mb)[0]
    a = mb[label]
    e = mb.triple.e
    for rho in rhos or RHO_SEARCH:
        y = e + a.scale(rho)
        cert = certify_regular_semisimple(mb, y)
        if cert.ok:
            return nf(rho), y, cert
    raise CartanError(f"no rho in the search set makes e + rho*X{label} regular semisimple; "
                      "solve for rho symbolically")


@dataclass
class OppositeCartan:
    rho: NFElem
    a_label: Label
    a: ExactMatrix
    y: list[ExactMatrix]
    components: list[dict[Label, NFElem]]
    gram: ExactMatrix
    exponents: tuple[int, ...]
    certificate: RegularityCertificate | None = field(default=None, repr=False)

    def gram_in_order(self, order: list[int]) -> ExactMatrix:
        """Gram matrix re-indexed by 1-based positions, e.g. [1, 4, 2, 3]."""
        return ExactMatrix([[self.gram[i - 1, j - 1] for j in order] for i in order], zero=ZERO)

    def antidiagonal_order(self) -> list[int]:
        """Order pairing ``eta_i`` with ``kappa + 1 - eta_i`` across the antidiagonal.

        Ascending weight, ties by index, so for D4 this is [1, 4, 2, 3].
        """
        return sorted(range(1, len(self.exponents) + 1), key=lambda i: (self.exponents[i - 1], i))


def _class_projection(comp: dict[Label, NFElem], residue: int, modulus: int) -> dict[Label, NFElem]:
    return {l: c for l, c in comp.items() if (2 * l[1]) % modulus == residue}


def cartan_basis(mb: ModuleBasis, rho: NFElem, y1: ExactMatrix, a_label: Label,
                 certificate: RegularityCertificate | None = None) -> OppositeCartan:
    """Basis ``y_i = v_i - X^i_{eta_i}`` of ker ad y1, ``v_i`` in grade ``2 eta_i - 2(kappa+1)``.

    The kernel is graded modulo ``2(kappa+1)`` because ``y1`` is homogeneous
    of grade 2 there, so each ``y_i`` is found inside one residue class by a
    linear solve fixing its top component.
    """
    alg = mb.alg
    r = mb.rank
    k1 = mb.kappa + 1
    modulus = 2 * k1
    ker = nullspace(alg.ad_matrix(y1))
    if len(ker) != r:
        raise CartanError(f"ker ad y1 has dimension {len(ker)}, expected {r}")
    kernel = [mb.coords(alg.coordinates.combine(v)) for v in ker]
    exps = tuple(mb.eta(i) for i in range(1, r + 1))
    ys, comps = [], []
    for i in range(1, r + 1):
        eta = exps[i - 1]
        top = 2 * eta
        low = top - 2 * k1
        residue = top % modulus
        # homogeneous pieces of the kernel in this residue class span its class part
        pieces = [_class_projection(c, residue, modulus) for c in kernel]
        pieces = [p for p in pieces if p]
        top_labels = sorted({l for p in pieces for l in p if 2 * l[1] == top}
                            | {(i, eta)})
        mat = [[p.get(l, ZERO) for p in pieces] for l in top_labels]
        rhs = [nf(-1) if l == (i, eta) else ZERO for l in top_labels]
        lam = solve(mat, rhs)
        if lam is None:
            raise CartanError(f"y_{i}: cannot make the grade-{top} component equal -X^{i}_{eta}")
        comp: dict[Label, NFElem] = {}
        for c, p in zip(lam, pieces):
            if c:
                for l, v in p.items():
                    comp[l] = comp.get(l, ZERO) + c * v
        comp = {l: v for l, v in comp.items() if v}
        stray = sorted({2 * l[1] for l in comp} - {top, low})
        if stray:
            raise CartanError(f"y_{i} has components in grades {stray} besides {top} and {low}")
        comps.append(comp)
        ys.append(mb.combine(comp))
    gram = ExactMatrix([[alg.form(a, b) for b in ys] for a in ys], zero=ZERO)
    return OppositeCartan(nf(rho), a_label, mb[a_label], ys, comps, gram, exps, certificate)


@dataclass
class GoldReport:
    entries: dict[tuple[int, int], tuple[NFElem, NFElem]]

    @property
    def failures(self) -> list[tuple[int, int]]:
        return [ij for ij, (lhs, rhs) in self.entries.items() if lhs != rhs]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_gold_identity(mb: ModuleBasis, oc: OppositeCartan) -> GoldReport:
    """Check ``<[a,X^i_eta_i], X^j_{eta_j-1}>/(2 eta_j) + (i<->j) = A_ij / rho`` for all pairs."""
    alg = mb.alg
    a = oc.a
    r = len(oc.exponents)
    out = {}
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            ei, ej = mb.eta(i), mb.eta(j)
            lhs = (alg.form(a.commutator(mb[(i, ei)]), mb[(j, ej - 1)]) / (2 * ej)
                   + alg.form(a.commutator(mb[(j, ej)]), mb[(i, ei - 1)]) / (2 * ei))
            out[(i, j)] = (lhs, oc.gram[i - 1, j - 1] / oc.rho)
    return GoldReport(out)


def opposite_cartan(mb: ModuleBasis) -> OppositeCartan:
    rho, y1, cert = find_cyclic_element(mb)
    return cartan_basis(mb, rho, y1, cyclic_candidates(mb)[0], cert)
