import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.numerics.ballharmonic import linear_profile, sample_sphere, sign_profile
from src.verify.maps import (FmBoundaryMap, axisym_component_map, constant_map, hm_profile,
                             meridian_points, random_trig_map, sign_map, zero_map)

T = np.linspace(-1.0, 1.0, 2001)

def test_h2_is_identity():
    assert_allclose(hm_profile(3, 2)(T), T, atol=1e-15)

@pytest.mark.parametrize("m", [3, 5, 20, 100])
def test_hm_is_increasing_odd_bijection(m):
    h = hm_profile(3, m)(T)
    assert np.all(np.diff(h) > 0)
    assert_allclose(h, -h[::-1], atol=1e-12)
    assert h[0] == pytest.approx(-1.0)
    assert h[-1] == pytest.approx(1.0)
    edge = 1.0 / m
    inside, outside = hm_profile(3, m)([edge, edge + 1e-12])
    assert abs(inside - outside) < 1e-9

def test_hm_literal_variant_jumps():
    m = 4
    h = hm_profile(3, m, literal=True)
    assert float(h(1.0)) == pytest.approx(1 - 1 / m)
    inside, outside = h([1 / m, 1 / m + 1e-12])
    assert outside - inside == pytest.approx((m - 1) / m ** 2, abs=1e-9)

def test_hm_rejects_small_m():
    with pytest.raises(ValueError):
        hm_profile(3, 1)

def test_hm_break_points():
    assert hm_profile(4, 10).breakpoints == (-0.1, 0.1)

@pytest.mark.parametrize("n, m", [(2, 5), (3, 20), (5, 3)])
def test_fm_maps_sphere_to_sphere(n, m, rng):
    zeta = sample_sphere(rng, 2000, n)
    fm = FmBoundaryMap(n, m)
    assert fm.max_norm_defect(zeta) <= 1e-12
    assert_allclose(fm.evaluate(-zeta), -fm.evaluate(zeta), atol=1e-15)

def test_fm_at_poles():
    fm = FmBoundaryMap(3, 7)
    poles = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    assert_allclose(fm.evaluate(poles), poles, atol=1e-15)

def test_fm_literal_leaves_sphere():
    zeta = np.array([[0.0, 0.0, 1.0]])
    assert FmBoundaryMap(3, 4, literal=True).max_norm_defect(zeta) == pytest.approx(0.25)

@pytest.mark.parametrize("m", [2, 5, 50])
def test_fm_defect_on_default_meridian(m):
    assert FmBoundaryMap(4, m, literal=True).max_norm_defect() == pytest.approx(1 / m)
    assert FmBoundaryMap(4, m).max_norm_defect() <= 1e-12

def test_meridian_points_lie_on_sphere():
    zeta = meridian_points(5, 11)
    assert zeta.shape == (11, 5)
    assert_allclose(np.linalg.norm(zeta, axis=1), 1.0)
    assert_allclose(zeta[[0, -1], -1], [1.0, -1.0])

def test_fm_boundary_map_last_component_is_hm(rng):
    zeta = sample_sphere(rng, 100, 3)
    values = FmBoundaryMap(3, 5).boundary_map()(zeta)
    assert_allclose(values[:, -1], hm_profile(3, 5)(zeta[:, -1]))

def test_sign_and_zero_maps(rng):
    zeta = sample_sphere(rng, 100, 4)
    values = sign_map(4)(zeta)
    assert_allclose(values[:, :-1], 0.0)
    assert_allclose(values[:, -1], np.sign(zeta[:, -1]))
    assert np.all(zero_map(4)(zeta) == 0.0)

def test_constant_map_rejects_points_outside_ball():
    with pytest.raises(ValueError):
        constant_map((0.8, 0.8))

def test_axisym_component_map(rng):
    zeta = sample_sphere(rng, 50, 3)
    bmap = axisym_component_map([sign_profile(3), linear_profile(3)])
    values = bmap(zeta)
    assert_allclose(values[:, 0], np.sign(zeta[:, -1]))
    assert_allclose(values[:, 1], zeta[:, -1])
    assert_allclose(values[:, 2], 0.0)

@pytest.mark.parametrize("odd", [True, False])
def test_random_trig_map_stays_in_ball(rng, odd):
    bmap = random_trig_map(3, rng, odd=odd)
    zeta = sample_sphere(rng, 5000, 3)
    assert np.max(np.linalg.norm(bmap(zeta), axis=1)) <= 1.0
    assert bmap.odd is odd

def test_random_odd_trig_map_is_odd(rng):
    bmap = random_trig_map(4, rng, odd=True)
    zeta = sample_sphere(rng, 500, 4)
    np.testing.assert_array_equal(bmap(-zeta), -bmap(zeta))

def test_random_trig_map_is_seeded():
    first = random_trig_map(3, np.random.Generator(np.random.PCG64(1)))
    second = random_trig_map(3, np.random.Generator(np.random.PCG64(1)))
    zeta = np.array([[0.6, 0.0, 0.8]])
    np.testing.assert_array_equal(first(zeta), second(zeta))
