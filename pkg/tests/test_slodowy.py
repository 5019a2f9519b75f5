from __future__ import annotations

import random
from fractions import Fraction

import pytest

from subregfrob import reference as ref
from subregfrob.exact import SQRT3, SQRT5, ExactMatrix, MPoly, nf, nullspace
from subregfrob.exact.nf import ONE, ZERO
from subregfrob.slodowy import (build_hypersurface, invariant_polys, milnor_number, normalize_slodowy,
                                slice_element, slice_weights)


@pytest.fixture(scope="module")
def inv(d4):
    return invariant_polys(d4[2])


@pytest.fixture(scope="module")
def chart(d4, inv):
    return normalize_slodowy(d4[2], inv)


def point_matrix(mb, z):
    m = mb.triple.e
    for i, zi in enumerate(z, start=1):
        m = m + mb[(i, -mb.eta(i))].scale(nf(zi))
    return m


def test_weights(d4):
    assert slice_weights(d4[2]) == [4, 8, 8, 4, 4, 6]


def test_invariants_quasihomogeneous(d4, inv):
    w = slice_weights(d4[2])
    degs = [sorted(p.weighted_degrees(w)) for p in inv.basic]
    assert degs == [[4], [8], [12], [8]]
    assert inv.pfaffian * inv.pfaffian == inv.charpoly[8]
    assert all(not inv.charpoly[k] for k in (1, 3, 5, 7))


def unipotent_exp(n: ExactMatrix) -> ExactMatrix:
    out = ExactMatrix.identity(n.rows)
    term = ExactMatrix.identity(n.rows)
    k = 1
    while True:
        term = (term @ n).scale(nf(Fraction(1, k)))
        if term.is_zero():
            return out
        out = out + term
        k += 1


def test_charpoly_invariant_under_unipotent_conjugation(d4):
    _, tr, mb = d4
    n = tr.e.scale(nf(Fraction(2, 3))) - mb[(2, 3)]
    g, ginv = unipotent_exp(n), unipotent_exp(n.scale(nf(-1)))
    assert g @ ginv == ExactMatrix.identity(8)
    rng = random.Random(1)
    for _ in range(3):
        z = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(6)]
        m = point_matrix(mb, z)
        assert (g @ m @ ginv).charpoly() == m.charpoly()


def _pfaffian(a):
    n = len(a)
    if n == 0:
        return ONE
    total = ZERO
    for j in range(1, n):
        if not a[0][j]:
            continue
        rest = [k for k in range(1, n) if k != j]
        sub = [[a[r][c] for c in rest] for r in rest]
        sign = 1 if j % 2 == 1 else -1
        total = total + a[0][j] * _pfaffian(sub) * sign
    return total


def test_pfaffian_against_invariant_form(d4, inv):
    # independent oracle: find the symmetric form J preserved by the algebra,
    # then Pf(J m) must be a fixed multiple of the computed Pfaffian
    alg, tr, mb = d4
    gens = [tr.e, tr.f] + [mb[(i, -mb.eta(i))] for i in range(2, 7)]
    idx = [(r, c) for r in range(8) for c in range(r, 8)]
    rows = []
    for g in gens:
        for a in range(8):
            for b in range(8):
                # (g^T J + J g)[a, b]
                row = [ZERO] * len(idx)
                for k, (r, c) in enumerate(idx):
                    val = ZERO
                    for (rr, cc) in {(r, c), (c, r)}:
                        if cc == b:
                            val = val + g[rr, a]
                        if rr == a:
                            val = val + g[cc, b]
                    row[k] = val
                rows.append(row)
    ns = nullspace(rows)
    assert len(ns) == 1
    J = [[ZERO] * 8 for _ in range(8)]
    for k, (r, c) in enumerate(idx):
        J[r][c] = J[c][r] = ns[0][k]
    Jm = ExactMatrix(J, zero=ZERO)
    rng = random.Random(5)
    ratio = None
    for _ in range(3):
        z = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(6)]
        m = Jm @ point_matrix(mb, z)
        assert m == m.transpose().scale(nf(-1))
        pf_val = inv.pfaffian.evaluate(z)
        got = _pfaffian(m.entries)
        if pf_val:
            r = got / pf_val
            ratio = ratio or r
            assert r == ratio
    assert ratio


def test_chart_matches_published(chart):
    assert chart.t_of_z == ref.t_of_z()
    assert chart.quasihomogeneity_defects() == []
    for i in range(6):
        assert chart.t_of_z[i].subs(chart.z_of_t) == MPoly.var(6, i)


def test_t0(chart):
    assert chart.t0 == ref.t0()
    assert chart.t0_scale == nf(Fraction(1, 16))
    t6 = MPoly.var(6, 5)
    assert chart.t0.diff(5) == t6 * -54


def test_singular_fiber(chart):
    fiber = chart.singular_fiber([3, 4, 5])
    assert fiber == ref.singular_fiber()


def test_milnor_number(chart):
    fiber = chart.singular_fiber([3, 4, 5])
    f3 = MPoly.from_terms(3, {e[3:]: c for e, c in fiber.terms.items()})
    assert milnor_number(f3, [4, 4, 6]) == 4


def test_milnor_number_simple_cases():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    assert milnor_number(x ** 3 + y ** 2, [2, 3]) == 2        # A2
    assert milnor_number(x ** 2 * y + y ** 4, [3, 2]) == 5    # D5


def test_hypersurface(chart):
    hn = build_hypersurface(chart, 4)
    t = [MPoly.var(4, i) for i in range(4)]
    assert hn.ring.p1 == t[0] * (2 / SQRT5)
    assert hn.ring.p0 == t[0] ** 2 * nf(Fraction(-3, 10)) + t[3] ** 2 - t[1] * (SQRT3 / 5)
    assert hn.branch_ok()
    assert hn.ring.disc.sqrt() is None


def test_slice_element_shape(d4):
    m = slice_element(d4[2])
    assert m.rows == 8 and m.entries[1][0] == MPoly.const(6, 1)
