import math

import numpy as np
import pytest

from quadlab.arfamily import build_G, f_generator
from quadlab.armap import (
    Chart,
    DEGENERACY_P,
    degeneracy_points_at,
    degeneracy_threshold,
    eval_F,
    eval_f,
    fd_jacobian_F,
    jacobian_F,
    jacobian_restricted,
    rank_on_quadric,
)
from quadlab.quadric import QuadricPoint, sample_mt, to_w_coords

from oracles import fd_jacobian, min_two_var_norm

SQRT2 = math.sqrt(2.0)


def test_eval_f_kills_terms():
    assert np.allclose(eval_f(1, 0), [1, 0, 0], atol=0)
    assert np.allclose(eval_f(0, 1), [0, 1, 0], atol=0)


def test_eval_F_examples():
    assert np.allclose(eval_F([1, 1, 0, 0]), [1, 0, 0], atol=0)
    assert np.allclose(eval_F([1, 1, 1, 0]), [1, 1, 0], atol=0)
    wupp = [1, (1 + 1j) / 2, 1, (1 - 1j) / 2]
    assert np.array_equal(eval_F(wupp), np.array([1, 1, 0], dtype=complex))


def test_push_forward_compatibility():
    rng = np.random.default_rng(21)
    worst = 0.0
    for _ in range(10_000):
        z, w = (complex(*rng.standard_normal(2)) for _ in range(2))
        lhs = eval_F(to_w_coords([z.real, z.imag, w.real, w.imag]))
        rhs = eval_f(z, w)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    assert worst <= 1e-12


def test_f_third_component_is_the_polarized_polynomial():
    gmap = build_G(*f_generator())
    rng = np.random.default_rng(22)
    for _ in range(1000):
        v = rng.standard_normal(4)
        v /= np.linalg.norm(v)
        z, w = complex(v[0], v[1]), complex(v[2], v[3])
        val = gmap.third_w.eval_complex([z, z.conjugate(), w, w.conjugate()])
        assert abs(val - eval_f(z, w)[2]) <= 1e-14


def test_jacobian_F_row3_at_basepoint():
    J = jacobian_F([1, 1, 0, 0])
    assert np.array_equal(J[0], [1, 0, 0, 0])
    assert np.array_equal(J[1], [0, 0, 1, 0])
    assert np.array_equal(J[2], [0, 0, 0, 1j])


def test_jacobian_F_matches_central_differences():
    rng = np.random.default_rng(23)
    for _ in range(100):
        W = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        fd = fd_jacobian(eval_F, W, step=1e-6)
        scale = max(1.0, float(np.max(np.abs(jacobian_F(W)))))
        assert np.max(np.abs(jacobian_F(W) - fd)) <= 1e-6 * scale
    # module helper agrees with the oracle
    W = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert np.allclose(fd_jacobian_F(W), fd_jacobian(eval_F, W), atol=1e-12)


def test_full_rank_on_quadric():
    points = sample_mt(3, 1.8, 10_000, seed=24)
    worst = math.inf
    for p in points:
        s = np.linalg.svd(jacobian_F(p.to_quadric_point().as_array()), compute_uv=False)
        worst = min(worst, float(s[2]))
    assert worst > 1e-8
    assert rank_on_quadric([1, 1, 0, 0]) == 3


def test_restricted_jacobian_chart_selection_and_values():
    j = jacobian_restricted(QuadricPoint(1, 1, 0, 0))
    assert j.chart is Chart.PHI
    assert j.value == 1j


def test_restricted_jacobian_phi_zero():
    p = (3 + SQRT2 - 1j) / 6
    w3, w4 = 1.0, p
    w1 = 1.1
    point = QuadricPoint(w1, (1 - p) / w1, w3, w4)
    j = jacobian_restricted(point)
    assert j.chart is Chart.PHI
    assert abs(j.value) <= 1e-14


def test_restricted_jacobian_psi_zero():
    q = (3 + SQRT2 + 1j) / 6
    w1 = 0.5
    w3 = 1.2
    point = QuadricPoint(w1, q / w1, w3, (1 - q) / w3)
    j = jacobian_restricted(point)
    assert j.chart is Chart.PSI
    assert abs(j.value) <= 1e-14


def test_restricted_jacobian_rejects_off_quadric():
    bad = QuadricPoint.__new__(QuadricPoint)
    object.__setattr__(bad, "w1", 1.0)
    object.__setattr__(bad, "w2", 1.0)
    object.__setattr__(bad, "w3", 1.0)
    object.__setattr__(bad, "w4", 1.0)
    with pytest.raises(ValueError):
        jacobian_restricted(bad)


def test_charts_vanish_together():
    # both chart formulas differ by the factor w1/w3, so away from the
    # coordinate axes one vanishing forces the other
    rng = np.random.default_rng(25)
    for p in sample_mt(3, 1.3, 500, seed=25):
        W = p.to_quadric_point()
        if abs(W.w1) < 1e-3 or abs(W.w3) < 1e-3:
            continue
        prod = W.w3 * W.w4
        num = (3j - 3) * prod**2 + (2 - 4j) * prod + 1j
        j_phi = num / W.w1
        j_psi = num / W.w3
        assert abs(j_psi) == pytest.approx(abs(j_phi) * abs(W.w1 / W.w3), rel=1e-9)
        if abs(j_phi) <= 1e-10:
            assert abs(j_psi) <= 1e-6


def test_degeneracy_threshold_value():
    thr = degeneracy_threshold()
    assert thr == pytest.approx(math.sqrt((2 + SQRT2) / 3), abs=0)
    assert round(thr, 4) == 1.0668
    # closed-form consistency: min over the locus of norm_sum/2 equals thr
    lhs = (math.sqrt((2 + SQRT2) / 6) + math.sqrt((2 - SQRT2) / 6)) ** 2
    assert lhs == pytest.approx((2 + SQRT2) / 3, abs=1e-12)


def test_degeneracy_points_empty_below_threshold():
    out = degeneracy_points_at(1.05)
    assert len(out) == 0
    assert out.norm_floor > 2 * 1.05


def test_degeneracy_points_at_threshold_match_minimizer_oracle():
    thr = degeneracy_threshold()
    out = degeneracy_points_at(thr)
    assert len(out) == 2
    for point, p in zip(out.points, DEGENERACY_P):
        a, b = abs(1 - p) ** 2, abs(p) ** 2
        value, xstar, ystar = min_two_var_norm(a, b)
        assert value == pytest.approx(2 * thr, abs=1e-9)
        assert abs(point.w1) ** 2 == pytest.approx(xstar, abs=1e-6)
        assert abs(point.w3) ** 2 == pytest.approx(ystar, abs=1e-6)


def test_degeneracy_points_above_threshold_are_witnesses():
    out = degeneracy_points_at(1.2)
    assert len(out) == 2
    for point in out:
        assert point.quadric_residual <= 1e-12
        assert abs(point.norm_sum - 2 * 1.2) <= 1e-10
        assert abs(jacobian_restricted(point).value) <= 1e-10
