from __future__ import annotations

import itertools

import numpy as np
import pytest

from subregfrob import reference as ref
from subregfrob.cartan import certify_regular_semisimple, opposite_cartan, verify_gold_identity
from subregfrob.exact import SQRT5, nf
from subregfrob.poisson import det_small
from subregfrob.exact.nf import ZERO


@pytest.fixture(scope="module")
def oc(d4):
    return opposite_cartan(d4[2])


def test_cyclic_element(oc):
    assert oc.rho == 1
    assert oc.a_label == (3, -3)
    assert oc.certificate.kernel_dim == 4
    assert oc.certificate.ok


def test_nilpotent_is_not_regular_semisimple(d4):
    _, tr, mb = d4
    cert = certify_regular_semisimple(mb, tr.e)
    assert not cert.ok


def test_ad_y1_diagonalizable_numerically(d4, oc):
    # independent float check: eigenvectors of ad y1 span the whole space
    ad = d4[0].ad_matrix(oc.y[0])
    m = np.array([[float(x) for x in row] for row in ad.entries])
    vals, vecs = np.linalg.eig(m)
    assert np.linalg.matrix_rank(vecs, tol=1e-8) == 28
    assert int(np.sum(np.abs(vals) < 1e-9)) == 4


def test_gram_matrix(oc):
    g = oc.gram_in_order([1, 4, 2, 3])
    assert g == ref.GRAM
    assert g[1, 2] == -4 / SQRT5
    assert oc.antidiagonal_order() == [1, 4, 2, 3]


def test_basis_matches_published(oc):
    assert oc.components == ref.Y_COMPONENTS
    assert oc.exponents == (1, 3, 3, 1)


def test_basis_commutes(oc):
    for a, b in itertools.combinations(oc.y, 2):
        assert a.commutator(b).is_zero()


def test_gold_identity(d4, oc):
    rep = verify_gold_identity(d4[2], oc)
    assert len(rep.entries) == 16
    assert rep.failures == []


def test_det_over_rho(oc):
    m = [[x / oc.rho for x in row] for row in oc.gram.entries]
    assert det_small(m, ZERO) == nf(256) / 5
