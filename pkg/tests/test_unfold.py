import math

import numpy as np
import pytest

from qunfold.errors import DimensionMismatch
from qunfold.gentropy import MLOG, bridged_f, catalog_g
from qunfold.matcore import expi_hermitian
from qunfold.petz import KMB, catalog_f
from qunfold.states import (
    ProbabilityVector,
    TangentVectorM,
    UnfoldedPoint,
    UnitaryMatrix,
    haar_unitary,
    make_rng,
    random_tangent_m,
    sample_simplex,
)
from qunfold.unfold import (
    dequantize,
    fisher_rao,
    g_expansion_metric,
    project,
    pullback_metric,
    split_metric,
    tangent_project,
)

from conftest import SIGMA_X


def point(u, p):
    return UnfoldedPoint(UnitaryMatrix(u), ProbabilityVector(p))


def random_point(n, rng):
    return UnfoldedPoint(haar_unitary(n, rng), sample_simplex(n, rng))


def test_project_examples():
    p = ProbabilityVector([0.2, 0.3, 0.5])
    np.testing.assert_array_equal(project(UnfoldedPoint(UnitaryMatrix.identity(3), p)).mat, np.diag(p.p))
    rng = make_rng(1)
    for n in (2, 3, 4):
        u = haar_unitary(n, rng)
        rho = project(UnfoldedPoint(u, ProbabilityVector(np.full(n, 1 / n))))
        np.testing.assert_allclose(rho.mat, np.eye(n) / n, atol=1e-15)
        m = random_point(n, rng)
        np.testing.assert_allclose(project(m).spectrum.eigenvalues, np.sort(m.p.p), atol=1e-10)


def test_dequantize():
    rng = make_rng(2)
    p = ProbabilityVector([0.3, 0.7])
    a = UnfoldedPoint(haar_unitary(2, rng), p)
    b = UnfoldedPoint(haar_unitary(2, rng), p)
    assert dequantize(a) is p and np.array_equal(dequantize(a).p, dequantize(b).p)


def test_tangent_project_examples():
    p = ProbabilityVector([0.2, 0.3, 0.5])
    m = UnfoldedPoint(UnitaryMatrix.identity(3), p)
    v = np.array([0.1, 0.2, -0.3])
    np.testing.assert_allclose(tangent_project(m, TangentVectorM(np.zeros((3, 3)), v)).a, np.diag(v), atol=0)
    kernel = TangentVectorM(np.diag([1.0, -2.0, 0.5]), np.zeros(3))
    np.testing.assert_allclose(tangent_project(m, kernel).a, 0, atol=1e-16)


def test_tangent_project_matches_curve_derivative():
    rng = make_rng(3)
    for n in (2, 3, 4):
        for _ in range(10):
            m = random_point(n, rng)
            x = random_tangent_m(n, rng)
            x = TangentVectorM(x.h, x.v * 0.1 * m.p.p.min() / np.abs(x.v).max())
            a = tangent_project(m, x).a
            assert abs(np.trace(a)) < 1e-14

            def curve(s):
                u = m.u.mat @ expi_hermitian(x.h, s)
                return (u * (m.p.p + s * x.v)) @ u.conj().T

            h = 1e-5
            fd = (curve(h) - curve(-h)) / (2 * h)
            np.testing.assert_allclose(a, fd, atol=1e-8)


def test_fisher_rao_examples():
    half = ProbabilityVector([0.5, 0.5])
    assert fisher_rao(half, [1, -1], [1, -1]) == 4.0
    assert fisher_rao(half, [0, 0], [1, -1]) == 0.0
    rng = make_rng(4)
    uni = ProbabilityVector(np.full(4, 0.25))
    v, u = rng.standard_normal(4), rng.standard_normal(4)
    assert fisher_rao(uni, v, u) == pytest.approx(4 * np.dot(v, u), rel=1e-14)
    with pytest.raises(DimensionMismatch):
        fisher_rao(half, [1, -1, 0], [1, -1, 0])


def test_pullback_examples():
    rng = make_rng(5)
    m = random_point(3, rng)
    kernel = TangentVectorM(np.diag(rng.standard_normal(3)), np.zeros(3))
    y = random_tangent_m(3, rng)
    for f in catalog_f():
        assert abs(pullback_metric(m, kernel, y, f)) < 1e-10
        assert abs(pullback_metric(m, kernel, kernel, f)) < 1e-10
    at_identity = UnfoldedPoint(UnitaryMatrix.identity(3), m.p)
    v = TangentVectorM(np.zeros((3, 3)), [0.3, -0.1, -0.2])
    for f in catalog_f():
        assert pullback_metric(at_identity, v, v, f) == pytest.approx(fisher_rao(m.p, v.v, v.v), rel=1e-14)
    x = random_tangent_m(3, rng)
    for f in catalog_f():
        a, b = pullback_metric(m, x, y, f), pullback_metric(m, y, x, f)
        assert abs(a - b) < 1e-12 * max(1, abs(a))


def test_split_examples():
    rng = make_rng(6)
    m = random_point(3, rng)
    x = TangentVectorM(np.zeros((3, 3)), [0.2, -0.1, -0.1])
    for f in catalog_f():
        s = split_metric(m, x, x, f)
        assert s.quantum == 0 and s.total == s.classical == fisher_rao(m.p, x.v, x.v)
    uniform = UnfoldedPoint(haar_unitary(3, rng), ProbabilityVector(np.full(3, 1 / 3)))
    y = random_tangent_m(3, rng)
    for f in catalog_f():
        assert split_metric(uniform, y, y, f).quantum == 0


@pytest.mark.parametrize("f", catalog_f(), ids=lambda f: f.name)
def test_split_equals_pullback(f):
    rng = make_rng(7)
    for t in range(60):
        n = 2 + t % 3
        m = random_point(n, rng)
        x, y = random_tangent_m(n, rng), random_tangent_m(n, rng)
        s = split_metric(m, x, y, f)
        assert s.total == s.classical + s.quantum
        assert abs(s.total - pullback_metric(m, x, y, f)) < 1e-9


def test_quantum_term_hand_example():
    # U = I, p = (1/4, 3/4), H = sigma_x, v = 0. A = [i sigma_x, diag p] has A_12 = i/2, A_21 = -i/2, and
    # sum |A_jk|^2 / (p_k f(p_j/p_k)) with KMB(1/3) = (2/3)/ln 3 gives 2 * (1/4) / ((3/4)(2/3)/ln 3) = ln 3.
    m = point(np.eye(2), [0.25, 0.75])
    x = TangentVectorM(SIGMA_X, [0.0, 0.0])
    assert g_expansion_metric(m, x, x, MLOG) == pytest.approx(math.log(3), abs=1e-14)
    assert split_metric(m, x, x, KMB).quantum == pytest.approx(math.log(3), abs=1e-14)
    assert pullback_metric(m, x, x, KMB) == pytest.approx(math.log(3), abs=1e-14)


def test_expansion_examples():
    rng = make_rng(8)
    m = random_point(3, rng)
    x = TangentVectorM(np.zeros((3, 3)), [0.2, -0.1, -0.1])
    y = TangentVectorM(np.zeros((3, 3)), [0.05, 0.05, -0.1])
    for g in catalog_g():
        assert g_expansion_metric(m, x, y, g) == pytest.approx(fisher_rao(m.p, x.v, y.v), rel=1e-14)


@pytest.mark.parametrize("g", catalog_g(), ids=lambda g: g.name)
def test_expansion_equals_split_with_bridged_f(g):
    rng = make_rng(9)
    f = bridged_f(g)
    for t in range(60):
        n = 2 + t % 3
        m = random_point(n, rng)
        x, y = random_tangent_m(n, rng), random_tangent_m(n, rng)
        assert abs(g_expansion_metric(m, x, y, g) - split_metric(m, x, y, f).total) < 1e-9


def test_constant_shift_of_g_leaves_expansion_unchanged():
    # the g(1) terms must cancel exactly against a constant added to g
    from qunfold.gentropy import ConvexG

    rng = make_rng(10)
    shifted = ConvexG("mlog+3", lambda x: -np.log(np.asarray(x, float)) + 3.0, 3.0, 1.0)
    for n in (2, 3, 4):
        m = random_point(n, rng)
        x, y = random_tangent_m(n, rng), random_tangent_m(n, rng)
        assert g_expansion_metric(m, x, y, shifted) == pytest.approx(g_expansion_metric(m, x, y, MLOG), abs=1e-10)


def test_degenerate_spectrum():
    rng = make_rng(11)
    m = UnfoldedPoint(haar_unitary(4, rng), ProbabilityVector([0.1, 0.1, 0.4, 0.4]))
    x, y = random_tangent_m(4, rng), random_tangent_m(4, rng)
    for f in catalog_f():
        s = split_metric(m, x, y, f)
        assert np.isfinite(s.total)
        assert abs(s.total - pullback_metric(m, x, y, f)) < 1e-9


def test_classical_block_is_f_independent():
    rng = make_rng(12)
    m = random_point(3, rng)
    x, y = random_tangent_m(3, rng), random_tangent_m(3, rng)
    assert len({split_metric(m, x, y, f).classical for f in catalog_f()}) == 1


def test_dimension_checks():
    rng = make_rng(13)
    m = random_point(3, rng)
    with pytest.raises(DimensionMismatch):
        tangent_project(m, random_tangent_m(2, rng))
    with pytest.raises(DimensionMismatch):
        split_metric(m, random_tangent_m(3, rng), random_tangent_m(2, rng), KMB)
