import math

import numpy as np
import pytest

from quadlab.quadric import (
    QuadricPoint,
    RealFramePoint,
    from_w_coords,
    points_from_csv,
    points_to_csv,
    residuals,
    retract,
    sample_mt,
    sample_mt_frames,
    sample_sphere,
    to_w_coords,
)


def test_to_w_coords_examples():
    assert np.allclose(to_w_coords([1, 0, 0, 0]), [1, 1, 0, 0])
    assert np.allclose(to_w_coords([0, 0, 0, 1]), [0, 0, 1j, -1j])


def test_to_w_coords_need_not_be_on_quadric():
    w = to_w_coords([1j, 0, 0, 0])
    assert np.allclose(w, [1j, 1j, 0, 0])
    assert abs(w[0] * w[1] + w[2] * w[3] - 1) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        QuadricPoint.from_w(w)


def test_from_w_coords_examples():
    assert np.allclose(from_w_coords([1, 1, 0, 0]), [1, 0, 0, 0])
    assert np.allclose(from_w_coords([0, 0, 1j, -1j]), [0, 0, 0, 1])


def test_coord_roundtrip_is_exact():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        back = from_w_coords(to_w_coords(z))
        worst = max(worst, float(np.max(np.abs(back - z))))
    assert worst <= 1e-14


def test_sample_mt_single_point_identities():
    (p,) = sample_mt(3, 1.5, 1, seed=42)
    assert np.dot(p.x, p.x) == pytest.approx(1.25, abs=1e-12)
    assert np.dot(p.y, p.y) == pytest.approx(0.25, abs=1e-12)
    assert abs(np.dot(p.x, p.y)) <= 1e-12
    assert p.to_quadric_point().norm_sum == pytest.approx(3.0, abs=1e-12)


def test_sample_mt_converges_to_sphere():
    t = 1 + 1e-10
    for p in sample_mt(3, t, 50, seed=5):
        r = residuals(p.to_quadric_point())
        bound = math.sqrt(2 * (t - 1)) * (1 + 1e-6)
        assert abs(r.mu) <= bound and abs(r.eta) <= bound


def test_sample_mt_n2_quadric_residual():
    for p in sample_mt(2, 2.0, 100, seed=9):
        assert p.quadric_residual <= 1e-12


def test_sample_mt_rejects_bad_inputs():
    with pytest.raises(ValueError):
        sample_mt(3, 1.0, 1, seed=0)
    with pytest.raises(ValueError):
        sample_mt(3, 0.9, 1, seed=0)
    with pytest.raises(ValueError):
        sample_mt(1, 1.5, 1, seed=0)
    with pytest.raises(ValueError):
        sample_mt(3, 1.5, 0, seed=0)


def test_sample_mt_deterministic_in_seed():
    a = sample_mt(3, 1.7, 5, seed=123)
    b = sample_mt(3, 1.7, 5, seed=123)
    for p, q in zip(a, b):
        assert np.array_equal(p.x, q.x) and np.array_equal(p.y, q.y)


def test_retract_fixes_sphere_points():
    for p in sample_sphere(3, 10, seed=2):
        for s in (0.0, 0.3, 1.0):
            q = retract(p, s)
            assert np.allclose(q.x, p.x, atol=1e-14)
            assert np.allclose(q.y, p.y, atol=1e-14)


def test_retract_endpoint_behavior():
    for p in sample_mt(3, 2.0, 20, seed=3):
        q0 = retract(p, 0.0)
        assert q0.on_sphere(tol=1e-10)
        assert np.dot(q0.x, q0.x) == pytest.approx(1.0, abs=1e-12)
        q1 = retract(p, 1.0)
        assert np.allclose(q1.x, p.x, atol=1e-12) and np.allclose(q1.y, p.y, atol=1e-12)


def test_retract_midpoint_residual():
    for p in sample_mt(3, 2.0, 20, seed=4):
        assert retract(p, 0.5).quadric_residual <= 1e-12


def test_retract_is_homotopy_through_the_quadric():
    rng = np.random.default_rng(6)
    points = sample_mt(4, 1.8, 100, seed=6)
    for p in points:
        for s in rng.random(100):
            assert retract(p, float(s)).quadric_residual <= 1e-10


def test_retract_norm_sum_monotone_in_s():
    (p,) = sample_mt(3, 2.5, 1, seed=8)
    values = [retract(p, s).norm_sum for s in np.linspace(0, 1, 20)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_residuals_examples():
    r = residuals(QuadricPoint(1, 1, 0, 0))
    assert r.quadric_residual == 0 and r.mu == 0 and r.eta == 0 and r.norm_excess == 0

    r = residuals(QuadricPoint(1, 1, 1, 0))
    assert r.mu == 0
    assert r.eta == -1
    assert r.norm_excess == pytest.approx(0.5, abs=1e-14)


def test_residuals_norm_excess_equals_t_minus_1():
    t = 1.37
    for p in sample_mt(3, t, 200, seed=10):
        r = residuals(p.to_quadric_point())
        assert r.norm_excess == pytest.approx(t - 1, abs=1e-10)


def test_norm_excess_identity_bulk():
    X, Y = sample_mt_frames(3, 1.9, 10_000, seed=12)
    z = X + 1j * Y
    w1 = z[:, 0] + 1j * z[:, 1]
    w2 = z[:, 0] - 1j * z[:, 1]
    w3 = z[:, 2] + 1j * z[:, 3]
    w4 = z[:, 2] - 1j * z[:, 3]
    res = np.abs(w1 * w2 + w3 * w4 - 1)
    assert res.max() <= 1e-12
    norm_sum = sum(np.abs(c) ** 2 for c in (w1, w2, w3, w4))
    assert norm_sum.min() >= 2.0 - 1e-12
    mu = w2 - np.conj(w1)
    eta = w4 - np.conj(w3)
    excess = norm_sum / 2 - 1
    assert np.max(np.abs(2 * excess - (np.abs(mu) ** 2 + np.abs(eta) ** 2))) <= 1e-10


def test_mt_inside_ueps_iff_t_small():
    eps = 0.1
    t = 1 + eps**2 / 2 - 1e-9
    X, Y = sample_mt_frames(3, t, 10_000, seed=13)
    eta = 2 * (Y[:, 3] + 1j * Y[:, 2])
    mu = 2 * (Y[:, 1] + 1j * Y[:, 0])
    assert np.abs(mu).max() < eps and np.abs(eta).max() < eps
    # the bound is sharp: |eta| gets within a percent of eps over the sweep
    assert np.abs(eta).max() >= 0.99 * eps


def test_point_constructors_validate():
    with pytest.raises(ValueError):
        QuadricPoint(1, 1, 1, 1)
    with pytest.raises(ValueError):
        RealFramePoint(3, np.array([1.0, 0, 0, 0]), np.array([1.0, 0, 0, 0]))
    with pytest.raises(ValueError):
        RealFramePoint(1, np.array([1.0, 0]), np.zeros(2))


def test_frame_and_w_point_conversions_are_inverse():
    for p in sample_mt(3, 1.6, 50, seed=14):
        q = p.to_quadric_point().to_real_frame()
        assert np.allclose(q.x, p.x, atol=1e-13)
        assert np.allclose(q.y, p.y, atol=1e-13)


def test_csv_roundtrip():
    points = [p.to_quadric_point() for p in sample_mt(3, 1.4, 7, seed=15)]
    text = points_to_csv(points)
    back = points_from_csv(text)
    assert len(back) == 7
    for a, b in zip(points, back):
        assert np.allclose(a.as_array(), b.as_array(), atol=0)
