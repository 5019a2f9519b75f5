from __future__ import annotations

import random
from fractions import Fraction

import pytest

from subregfrob.exact import ExactMatrix, MPoly, nf, rank
from subregfrob.exact.nf import ZERO
from subregfrob.poisson import dirac_reduce, omega_matrix, w_identity_failures


def test_lie_poisson_matrix(state):
    lp = state.lp
    assert lp.n == 28 and lp.m == 6
    assert lp.antisymmetric()


def test_routes_agree(state):
    # the pipeline used fraction-free elimination; the graded series must agree
    alt = dirac_reduce(state.lp, route="neumann")
    ts = state.ts_z
    assert alt.F == ts.F and alt.g == ts.g and alt.G == ts.G
    assert ts.inverse_det == nf(Fraction(-1, 202500))


def test_unknown_route(state):
    with pytest.raises(ValueError):
        dirac_reduce(state.lp, route="lu")


def test_degrees(state):
    w = [4, 8, 8, 4, 4, 6]
    assert state.ts_z.degree_failures(w) == []
    assert state.ts_t.degree_failures(w) == []


def test_symmetries(state):
    ts = state.ts_z
    for i in range(6):
        for j in range(6):
            assert ts.F[i][j] == -ts.F[j][i]
            assert ts.g[i][j] == ts.g[j][i]


def test_rank_two_at_random_points(state):
    rng = random.Random(17)
    F = state.ts_z.F
    for _ in range(5):
        pt = [Fraction(rng.randint(-7, 7), rng.randint(1, 4)) for _ in range(6)]
        m = ExactMatrix([[x.evaluate(pt) for x in row] for row in F], zero=ZERO)
        assert rank(m) == 2


def test_invariants_are_casimirs(state):
    F = state.ts_z.F
    ch = state.chart
    # the basic invariants t1, t2, t3 and t0 restrict to Casimirs
    for t in ch.t_of_z[:3] + [ch.t0.subs(ch.t_of_z)]:
        grad = [t.diff(j) for j in range(6)]
        for i in range(6):
            acc = MPoly.zero(6)
            for j in range(6):
                acc = acc + F[i][j] * grad[j]
            assert acc.is_zero()


def test_jacobi_identity_of_reduced_bracket(state):
    F = state.ts_z.F
    for i, j, k in [(0, 1, 2), (3, 4, 5), (1, 3, 5), (0, 4, 5), (2, 3, 4)]:
        acc = MPoly.zero(6)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l in range(6):
                acc = acc + F[a][l] * F[b][c].diff(l)
        assert acc.is_zero()


def test_w_algebra_identities(state):
    tt = state.ts_t
    assert w_identity_failures(tt, state.mb.weights) == []
    t = [MPoly.var(6, i) for i in range(6)]
    assert tt.g[0][0] == t[0] * 2
    assert tt.G[0][1][1] == MPoly.const(6, 3)
    assert all(tt.G[0][1][k].is_zero() for k in range(6) if k != 1)


def test_omega_block(state):
    om = state.omega
    assert om.zero_block_ok and om.omega_ok
    assert om.constant == nf(Fraction(-1, 15))
    assert om.constant / 75 == nf(Fraction(-1, 1125))
    omega = omega_matrix(state.chart.t0)
    tt = state.ts_t
    for a in range(3):
        for b in range(3):
            assert tt.F[3 + a][3 + b] == omega[a][b] * om.constant


def test_restriction_to_N(state):
    red = state.red
    assert red.fhat_vanishes
    assert red.levi_civita_failures() == []
    det = red.nondegeneracy_det(2)
    assert det.is_constant() and det.constant_value() == nf(256) / 5


def test_unity_derivative_is_not_constant_in_t(state):
    # it becomes constant only after passing to flat coordinates
    g1 = state.red.unity_derivative(2)
    assert not all(x.is_constant() or x.is_zero() for row in g1 for x in row)
    assert all(x.is_constant() or x.is_zero() for row in state.pencil.g1 for x in row)
