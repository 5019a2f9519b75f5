from __future__ import annotations

import dataclasses
from fractions import Fraction

from subregfrob import reference as ref
from subregfrob.exact import SQRT5, MPoly, QuotientRing, nf
from subregfrob.frobenius import curvature, point_algebra_check, verify_pencil, verify_wdvv


def test_flat_coordinates(state):
    fc = state.flat
    assert fc.s_of_t == ref.s_of_t()
    for i in range(4):
        assert fc.s_of_t[i].subs(fc.t_of_s) == MPoly.var(4, i)
    assert fc.eta_up[0, 2] == 4 and fc.eta_up[2, 0] == 4
    assert fc.eta_up[1, 3] == -4 / SQRT5
    nonzero = {(i, j) for i in range(4) for j in range(4) if fc.eta_up[i, j]}
    assert nonzero == {(0, 2), (2, 0), (1, 3), (3, 1)}


def test_relation_in_flat_coordinates(state):
    p1, p0 = ref.z_relation()
    assert state.pencil.ring.p1 == p1
    assert state.pencil.ring.p0 == p0


def test_pencil_axioms(state):
    rep = state.pencil_report
    assert rep.ok
    assert rep.euler_degrees == [nf(Fraction(1, 2)), nf(1), nf(1), nf(Fraction(1, 2))]
    assert rep.unity_vector == [0, 0, 1, 0]
    assert [rep.R[i][i] for i in range(4)] == [nf(Fraction(k, 4)) for k in (1, 3, 3, 1)]
    assert state.pencil.charge == Fraction(1, 2)


def test_euler_scaling_of_g2(state):
    from subregfrob.frobenius import _lie_metric
    p = state.pencil
    LE = _lie_metric(p.E, p.g2, 4)
    for i in range(4):
        for j in range(4):
            assert LE[i][j] == p.g2[i][j] * nf(Fraction(-2, 4))


def test_pencil_detects_broken_metric(state):
    p = state.pencil
    g2 = [row[:] for row in p.g2]
    g2[0][0] = g2[0][0] + p.ring.var(1)
    bad = dataclasses.replace(p, g2=g2)
    assert not verify_pencil(bad).lie_E_g2_ok


def test_flat_pencil(state):
    p = state.pencil
    for lam in (1, -2, Fraction(1, 3), 0):
        assert curvature(p.metric(lam), p.christoffel(lam)) == {}


def test_curvature_detects_non_flat_metric():
    # contravariant metric y*delta, i.e. (dx^2 + dy^2)/y, has Gaussian curvature -1/(2y)
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    ring = QuotientRing(MPoly.zero(2), x, names=["x", "y"])
    half = nf(Fraction(1, 2))
    z = ring.zero()
    g = [[ring.poly(y), z], [z, ring.poly(y)]]
    G = [[[z, z], [z, z]], [[z, z], [z, z]]]
    G[0][1][0] = ring.const(-half)
    G[0][0][1] = ring.const(half)
    G[1][0][0] = ring.const(half)
    G[1][1][1] = ring.const(half)
    # metric compatibility holds, so a nonzero result is genuine curvature
    for i in range(2):
        for j in range(2):
            for k in range(2):
                assert g[i][j].diff(k) == G[i][j][k] + G[j][i][k]
    assert curvature(g, G) != {}


def test_potential_matches_published(state):
    pd = state.potential
    assert pd.F == ref.potential(pd.ring)
    diff = state.diff
    assert diff.ok and diff.best_branch == "Z"
    assert diff.z_scale == 1
    swapped = diff.branches["p1-Z"]
    assert sum(len(d.mismatches) for d in swapped.values()) == 12


def test_wdvv(state):
    w = state.wdvv
    assert w.checked == 256
    assert w.residuals == {}
    assert w.unity_ok and w.quasihomogeneous and w.eta_constant_antidiagonal and w.algebraic


def test_third_derivatives_along_unity(state):
    pd = state.potential
    for i in range(4):
        for j in range(4):
            assert pd.c(2, i, j) == pd.eta_low[i, j]


def test_wdvv_detects_broken_potential(state):
    pd = state.potential
    s = [pd.ring.var(i) for i in range(4)]
    # same weight 5/2, but not associative
    bad = dataclasses.replace(pd, F=pd.F + s[1] * s[1] * s[3], third={})
    w = verify_wdvv(bad)
    assert w.residuals
    assert w.quasihomogeneous


def test_point_algebra(state):
    assert state.point == {"commutative": True, "associative": True, "unit": True}


def test_point_algebra_other_point(state):
    pd = state.potential
    ring = pd.ring
    s1, s3, s4, z = nf(2), nf(-1), nf(Fraction(1, 5)), nf(-3)
    # Z^2 = p1 Z + p0 is linear in s2; solve for it
    f = lambda s2: z * z - ring.p1.evaluate([s1, s2, s3, s4]) * z - ring.p0.evaluate([s1, s2, s3, s4])  # noqa: E731
    s2 = -f(nf(0)) / (f(nf(1)) - f(nf(0)))
    assert f(s2) == 0
    assert all(point_algebra_check(pd, [s1, s2, s3, s4], z).values())
