"""Published D4 data and monomial-level diffs against computed objects.

Values are transcribed as printed, with these readings of misprints:
the coefficient of ``t4^2`` in ``s2`` is taken as ``-5*sqrt3/4``, the term
``t^5 t1^2`` in ``t0`` as ``t5 t1^2``, and the ``X^4_{-3}`` in ``y1`` as
``X^3_{-3}`` (there is no weight-3 vector in the fourth module).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import SQRT3, SQRT5, SQRT15, ExactMatrix, MPoly, NFElem, QElem, QuotientRing, nf
from .exact.nf import ZERO

__all__ = [
    "GRAM",
    "GRAM_ORDER",
    "OMEGA_MULTIPLE",
    "PolyDiff",
    "PotentialDiff",
    "Y_COMPONENTS",
    "diff_poly",
    "diff_potential",
    "potential",
    "s_of_t",
    "singular_fiber",
    "t0",
    "t_of_z",
    "z_relation",
]

Q = Fraction

GRAM_ORDER = [1, 4, 2, 3]
GRAM = ExactMatrix([
    [ZERO, ZERO, ZERO, nf(4)],
    [ZERO, ZERO, -4 / SQRT5, ZERO],
    [ZERO, -4 / SQRT5, ZERO, ZERO],
    [nf(4), ZERO, ZERO, ZERO],
], zero=ZERO)

OMEGA_MULTIPLE = nf(75)

Y_COMPONENTS: list[dict[tuple[int, int], NFElem]] = [
    {(1, 1): nf(-1), (3, -3): nf(1)},
    {(2, 3): nf(-1), (4, -1): -3 / SQRT5, (3, -1): -1 / (5 * SQRT3), (6, -1): nf(Q(1, 2))},
    {(3, 3): nf(-1), (1, -1): nf(3), (2, -1): -1 / (5 * SQRT3), (5, -1): 3 / SQRT5},
    {(4, 1): nf(-1), (2, -3): -1 / SQRT5},
]

# typo sites, as (object, exponent tuple)
TYPO_SITES = {
    "t0": {(2, 0, 0, 0, 1, 0)},
    "s_of_t": {(0, 0, 0, 2)},
    "potential": set(),
}


def _vars(n):
    return [MPoly.var(n, i) for i in range(n)]


def t_of_z() -> list[MPoly]:
    """Slodowy coordinates in the slice coordinates ``z1..z6``."""
    z1, z2, z3, z4, z5, z6 = _vars(6)
    return [
        z1,
        z2 - z1 ** 2 * (SQRT3 / 2) + z5 * z1 * (4 / SQRT15) + z4 ** 2 * (7 / (5 * SQRT3))
        - z5 ** 2 * (7 / (5 * SQRT3)),
        z3 - z1 ** 2 * nf(Q(3, 2)) - z4 * z1 * (4 / SQRT15) - z4 * z5 * (14 / (5 * SQRT3)),
        z4, z5, z6,
    ]


def t0() -> MPoly:
    t1, t2, t3, t4, t5, t6 = _vars(6)
    return (t1 ** 3 * 20 + t4 * t1 ** 2 * (18 * SQRT15) - t5 * t1 ** 2 * (18 * SQRT5)
            + t4 ** 2 * t1 * 60 + t5 ** 2 * t1 * 60 + t2 * t1 * (6 * SQRT3) + t3 * t1 * 18
            - t5 ** 3 * (20 * SQRT5) - t6 ** 2 * 27 + t3 * t4 * (12 * SQRT15)
            + t4 ** 2 * t5 * (60 * SQRT5) - t2 * t5 * (12 * SQRT15))


def singular_fiber() -> MPoly:
    _, _, _, t4, t5, t6 = _vars(6)
    return -t5 ** 3 * (20 * SQRT5) + t4 ** 2 * t5 * (60 * SQRT5) - t6 ** 2 * 27


def s_of_t() -> list[MPoly]:
    t1, t2, t3, t4 = _vars(4)
    return [
        t1,
        t2 + t1 ** 2 * (SQRT3 / 4) - t4 ** 2 * (5 * SQRT3 / 4),
        t3 + t1 ** 2 * nf(Q(3, 2)) + t4 * t1 * (SQRT15 / 2),
        t4,
    ]


def z_relation() -> tuple[MPoly, MPoly]:
    """``(p1, p0)`` with ``Z^2 = p1 Z + p0`` in the flat coordinates."""
    s1, s2, s3, s4 = _vars(4)
    p1 = s1 * (2 / SQRT5)
    p0 = -(s1 ** 2 * nf(Q(3, 20)) - s4 ** 2 * nf(Q(1, 4)) + s2 * (SQRT3 / 5))
    return p1, p0


def potential(ring: QuotientRing) -> QElem:
    """The printed potential as an element of ``ring`` (variables s1..s4 and Z)."""
    s1, s2, s3, s4 = (ring.var(i) for i in range(4))
    Z = ring.Z
    zpart = (-s1 ** 4 * SQRT5 - s4 ** 2 * s1 ** 2 * (10 * SQRT5) + s2 * s1 ** 2 * (8 * SQRT15)
             - s4 ** 4 * (25 * SQRT5) - s2 ** 2 * (48 * SQRT5) + s2 * s4 ** 2 * (40 * SQRT15))
    rest = (s1 ** 5 * 35 + s4 ** 2 * s1 ** 3 * 510 - s2 * s1 ** 3 * (48 * SQRT3) + s4 ** 4 * s1 * 775
            + s3 ** 2 * s1 * 360 - s2 * s3 * s4 * (720 * SQRT5) + s2 ** 2 * s1 * 1128
            - s2 * s4 ** 2 * s1 * (1840 * SQRT3))
    return Z * zpart / nf(180) + rest / nf(2880)


@dataclass
class PolyDiff:
    """Monomials where computed and published coefficients differ."""

    mismatches: list[tuple[tuple[int, ...], NFElem, NFElem]]
    typo_sites: set = field(default_factory=set)

    @property
    def unexplained(self):
        return [m for m in self.mismatches if m[0] not in self.typo_sites]

    @property
    def ok(self) -> bool:
        return not self.unexplained

    def to_json(self) -> list[dict]:
        return [{"exps": list(e), "computed": c.to_json(), "published": p.to_json(),
                 "typo_site": e in self.typo_sites} for e, c, p in self.mismatches]


def diff_poly(computed: MPoly, published: MPoly, typo_sites=()) -> PolyDiff:
    keys = sorted(set(computed.terms) | set(published.terms))
    out = []
    for e in keys:
        c, p = computed.coefficient(e), published.coefficient(e)
        if c != p:
            out.append((e, c, p))
    return PolyDiff(out, set(typo_sites))


@dataclass
class PotentialDiff:
    relation_match: bool
    z_scale: NFElem | None
    branches: dict[str, dict[str, PolyDiff]]

    @property
    def best_branch(self) -> str | None:
        good = [b for b, parts in self.branches.items() if all(d.ok for d in parts.values())]
        return good[0] if good else None

    @property
    def ok(self) -> bool:
        return self.relation_match and self.best_branch is not None

    def to_json(self) -> dict:
        return {
            "relation_match": self.relation_match,
            "z_scale": self.z_scale.to_json() if self.z_scale is not None else None,
            "best_branch": self.best_branch,
            "branches": {b: {k: d.to_json() for k, d in parts.items()} for b, parts in self.branches.items()},
        }


def _z_scale(ring: QuotientRing, p1: MPoly, p0: MPoly) -> NFElem | None:
    """``c`` with ``Z -> c Z`` carrying the published relation to the computed one."""
    if ring.p1 == p1 and ring.p0 == p0:
        return nf(1)
    # computed Z = c W with W^2 = p1 W + p0 means c p1 = P1 and c^2 p0 = P0
    for e, v in p1.terms.items():
        c = ring.p1.coefficient(e) / v
        if ring.p1 == p1 * c and ring.p0 == p0 * (c * c):
            return c
        return None
    return None


def diff_potential(F: QElem) -> PotentialDiff:
    """Compare a computed potential with the printed one for both roots of the relation."""
    ring = F.ring
    p1, p0 = z_relation()
    scale = _z_scale(ring, p1, p0)
    match = scale is not None
    sites = TYPO_SITES["potential"]
    branches = {}
    if match:
        ref = potential(ring)
        if scale != 1:
            # published Z equals computed Z / c
            ref = QElem(ring, ref.a, ref.b * scale.inverse(), ref.k)
        for name, cand in (("Z", F), ("p1-Z", F.swap_root())):
            if ref.k or cand.k:
                raise ValueError("potential with a discriminant denominator")
            branches[name] = {
                "Z^0": diff_poly(cand.a, ref.a, sites),
                "Z^1": diff_poly(cand.b, ref.b, sites),
            }
    return PotentialDiff(match, scale, branches)
