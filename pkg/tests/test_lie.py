from __future__ import annotations

import itertools
from math import comb

from hypothesis import given, settings
from hypothesis import strategies as st

from subregfrob.exact import ExactMatrix, nf, rank
from subregfrob.lie import dynkin_grading, pairing_constant


def test_triple_entries_and_relations(d4):
    alg, tr, _ = d4
    assert tr.e[1, 0] == 1
    assert tr.e[4, 1] == nf(-1) / 2
    assert tr.relations_hold()
    assert tr.h.commutator(tr.e) == tr.e.scale(2)
    assert tr.e.commutator(tr.f) == tr.h


def test_dimensions(d4):
    alg, tr, mb = d4
    assert alg.dim == 28
    assert alg.dim - rank(alg.ad_matrix(tr.e)) == 6
    assert sum(2 * w + 1 for w in mb.weights) == 28
    assert list(mb.weights) == [1, 3, 3, 1, 1, 2]
    assert mb.kappa == 3 and mb.rank == 4 and mb.eta0 == 5


def test_form_normalization(d4):
    alg, tr, _ = d4
    assert alg.form(tr.e, tr.f) == 1
    assert alg.form(tr.h, tr.h) == 2


def test_grading(d4):
    alg, tr, _ = d4
    g = dynkin_grading(alg, tr.h)
    assert {k: len(v) for k, v in g.items()} == {-6: 2, -4: 3, -2: 6, 0: 6, 2: 6, 4: 3, 6: 2}
    for i, j in itertools.combinations_with_replacement(g, 2):
        if i + j != 0:
            assert all(alg.form(a, b) == 0 for a in g[i] for b in g[j])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 27), st.integers(0, 27), st.integers(0, 27))
def test_form_invariance(d4, i, j, k):
    alg = d4[0]
    x, a, b = alg.basis[i], alg.basis[j], alg.basis[k]
    assert alg.form(x.commutator(a), b) + alg.form(a, x.commutator(b)) == 0
    assert alg.form(a, b) == alg.form(b, a)


def test_first_module_is_the_triple(d4):
    _, tr, mb = d4
    assert mb[(1, 1)] == tr.e.scale(-1)
    assert mb[(1, 0)] == tr.h
    assert mb[(1, -1)] == tr.f


def test_sl2_module_relations(d4):
    _, tr, mb = d4
    assert mb.check_relations() == []
    for (i, I) in mb.labels:
        x = mb[(i, I)]
        assert tr.h.commutator(x) == x.scale(2 * I)
        eta = mb.eta(i)
        if I < eta:
            assert tr.e.commutator(x) == mb[(i, I + 1)].scale(eta + I + 1)
        if I > -eta:
            assert tr.f.commutator(x) == mb[(i, I - 1)].scale(eta - I + 1)


def test_pairing_law_all_pairs(d4):
    alg, _, mb = d4
    for a, b in itertools.product(mb.labels, repeat=2):
        expected = 0
        if a[0] == b[0] and a[1] == -b[1]:
            eta = mb.eta(a[0])
            expected = (-1) ** (eta - a[1] + 1) * comb(2 * eta, eta - a[1])
        assert alg.form(mb[a], mb[b]) == expected, (a, b)


def test_pairing_constant():
    assert pairing_constant(1, 0) == 2
    assert pairing_constant(1, 1) == -1
    assert pairing_constant(3, -3) == -1
    assert pairing_constant(3, 0) == 20


def test_dual_basis(d4, dual):
    alg, _, mb = d4
    n = dual.size
    assert n == 28
    assert dual.order[:6] == [(i, -mb.eta(i)) for i in range(1, 7)]
    for I, J in itertools.product(range(n), repeat=2):
        assert alg.form(dual.lower[I], dual.upper[J]) == (1 if I == J else 0)


def test_gram_antidiagonal_outside_grade_zero(dual):
    # the six grade-0 vectors pair among themselves on the diagonal, which no
    # order can make antidiagonal; everything else is antidiagonal
    defects = dual.antidiagonal_defects()
    zero_pos = [k for k, l in enumerate(dual.order) if l[1] == 0]
    assert defects == [(k, k) for k in zero_pos]


def test_structure_constants_reproduce_brackets(d4, dual):
    n = dual.size
    for I, J in [(0, 1), (3, 20), (7, 7), (10, 27), (15, 16)]:
        lhs = dual.upper[I].commutator(dual.upper[J])
        rhs = ExactMatrix.zeros(8, 8)
        for K, c in dual.structure[I][J].items():
            rhs = rhs + dual.upper[K].scale(c)
        assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 27), st.integers(0, 27), st.integers(0, 27))
def test_structure_constant_jacobi(dual, i, j, k):
    assert dual.jacobi_residual(i, j, k) == {}
