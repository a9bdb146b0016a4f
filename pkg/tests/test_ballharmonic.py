import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import ortho_group

from src.errors import InsufficientSamples, PointOnBoundary, TooCloseToBoundary
from src.numerics.ballharmonic import (AxisymProfile, BallPoint, axisym_extension, axisym_radial_derivative,
                                       bounds_of, constant_profile, linear_profile, mc_extension,
                                       poisson_kernel, sign_profile, values_of)
from src.numerics.heinz import closed_form_oracle, u_profile
from src.verify.maps import constant_map, identity_map, sign_map

def test_kernel_at_origin_is_one():
    assert poisson_kernel(BallPoint((0.0, 0.0, 0.0)), (0.3, -0.4, 0.5)) == pytest.approx(1.0)

def test_kernel_on_axis():
    assert poisson_kernel(BallPoint.on_axis(3, 0.5), (0.0, 0.0, 1.0)) == pytest.approx(6.0)

def test_kernel_rejects_boundary_point():
    with pytest.raises(PointOnBoundary):
        poisson_kernel(BallPoint.on_axis(3, 1.0), (0.0, 0.0, 1.0))

def test_ball_point_helpers():
    point = BallPoint.along((3.0, 4.0), 0.5)
    assert_allclose(point.coords, (0.3, 0.4))
    assert point.dimension == 2
    assert point.norm == pytest.approx(0.5)
    with pytest.raises(ValueError):
        BallPoint((0.1,))

@pytest.mark.parametrize("n, r", [(3, 0.42), (3, 0.7), (6, 0.95)])
def test_constant_data_extends_to_constant(n, r):
    result = axisym_extension(constant_profile(n), r)
    assert abs(result.value - 1.0) <= 1e-10

def test_sign_data_matches_closed_forms():
    assert abs(axisym_extension(sign_profile(2), 0.5).value - 4 * math.atan(0.5) / math.pi) <= 1e-10
    assert abs(axisym_extension(sign_profile(3), 0.5).value - 0.6583592135001262) <= 1e-10

def test_linear_data_is_harmonic():
    assert abs(axisym_extension(linear_profile(4), 0.3).value - 0.3) <= 1e-10

@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("r", [0.1, 0.5, 0.9])
def test_extension_agrees_with_series(n, r):
    quadrature = axisym_extension(sign_profile(n), r).value
    series = u_profile(n, r, method="series")
    assert abs(quadrature - series.value) <= 1e-10 + series.error_bound

@pytest.mark.parametrize("n", [20, 40, 64])
def test_extension_agrees_with_profile_in_high_dimension(n):
    quadrature = axisym_extension(sign_profile(n), 0.9).value
    profile = u_profile(n, 0.9)
    assert profile.error_bound <= 1e-12
    assert abs(quadrature - profile.value) <= 1e-10
    assert 0 < profile.value < 1

def test_radial_derivative_examples():
    assert abs(axisym_radial_derivative(sign_profile(2), 0.0).value - 4 / math.pi) <= 1e-10
    assert abs(axisym_radial_derivative(constant_profile(4), 0.3).value) <= 1e-10
    derivative = axisym_radial_derivative(sign_profile(3), 0.5).value
    assert abs(derivative - closed_form_oracle(3, "V", 0.5)) <= 1e-8

def test_radial_derivative_near_boundary():
    r = 0.999
    derivative = axisym_radial_derivative(sign_profile(2), r, tol=1e-9).value
    assert_allclose(derivative, 4 / (math.pi * (1 + r * r)), rtol=0, atol=1e-7)

def test_axisym_rejects_boundary_radius():
    with pytest.raises(PointOnBoundary):
        axisym_extension(sign_profile(3), 1.0)

def test_mc_constant_map():
    c = (0.2, -0.5, 0.6)
    results = mc_extension(constant_map(c), BallPoint.on_axis(3, 0.6), 50_000, seed=3)
    assert np.all(np.abs(values_of(results) - c) <= 2 * bounds_of(results) + 1e-12)

def test_mc_identity_map():
    results = mc_extension(identity_map(3), BallPoint.on_axis(3, 0.3), 100_000, seed=5)
    assert np.all(np.abs(values_of(results) - (0.0, 0.0, 0.3)) <= 2 * bounds_of(results))

def test_mc_sign_map_matches_axisym_extension():
    results = mc_extension(sign_map(3), BallPoint.on_axis(3, 0.5), 200_000, seed=7)
    assert abs(results[-1].value - 0.6583592135001262) <= 2 * results[-1].error_bound

def test_mc_odd_map_vanishes_at_origin():
    results = mc_extension(sign_map(4), BallPoint((0.0,) * 4), 10_000, seed=1)
    assert np.all(values_of(results) == 0.0)

def test_mc_is_independent_of_thread_count():
    bmap = sign_map(3)
    x = BallPoint((0.1, 0.2, 0.4))
    one = mc_extension(bmap, x, 40_000, seed=9, threads=1)
    many = mc_extension(bmap, x, 40_000, seed=9, threads=4)
    np.testing.assert_array_equal(values_of(one), values_of(many))
    np.testing.assert_array_equal(bounds_of(one), bounds_of(many))

def test_mc_rotation_moves_evaluation_point():
    rotation = ortho_group.rvs(3, random_state=4)
    bmap = sign_map(3)
    x = BallPoint.on_axis(3, 0.5)
    moved = BallPoint(tuple(rotation.T @ x.array()))
    direct = mc_extension(bmap, x, 100_000, seed=2)
    rotated = mc_extension(bmap.rotated(rotation), moved, 100_000, seed=2)
    gap = np.abs(values_of(direct) - values_of(rotated))
    assert np.all(gap <= 2 * (bounds_of(direct) + bounds_of(rotated)))

def test_mc_guards():
    with pytest.raises(TooCloseToBoundary):
        mc_extension(sign_map(3), BallPoint.on_axis(3, 0.96), 10_000, seed=1)
    with pytest.raises(InsufficientSamples):
        mc_extension(sign_map(3), BallPoint.on_axis(3, 0.5), 500, seed=1)
    with pytest.raises(ValueError):
        mc_extension(sign_map(3), BallPoint.on_axis(4, 0.5), 10_000, seed=1)

def piecewise_profile(n, rng, pieces=4):
    breaks = np.sort(rng.uniform(-1.0, 1.0, pieces - 1))
    levels = rng.uniform(-1.0, 1.0, pieces)
    return AxisymProfile(lambda t: levels[np.searchsorted(breaks, t)], n, tuple(breaks), "steps"), levels

_cases = np.random.Generator(np.random.PCG64(31))
NORMALIZATION_CASES = [(int(n), float(r)) for n, r in
                       zip(_cases.integers(2, 13, 20), _cases.uniform(0.0, 0.95, 20))]

@pytest.mark.parametrize("n, r", NORMALIZATION_CASES)
def test_kernel_integrates_to_one(n, r):
    assert abs(axisym_extension(constant_profile(n), r).value - 1.0) <= 1e-10

@pytest.mark.parametrize("n", [2, 3, 6])
def test_extension_is_linear(n, rng):
    first, _ = piecewise_profile(n, rng)
    second, _ = piecewise_profile(n, rng)
    alpha, beta = rng.uniform(-2.0, 2.0, 2)
    for r in rng.uniform(0.0, 0.9, 3):
        combined = axisym_extension(first.combine(alpha, second, beta), r).value
        separate = alpha * axisym_extension(first, r).value + beta * axisym_extension(second, r).value
        assert abs(combined - separate) <= 1e-10

@pytest.mark.parametrize("n", [2, 4, 7])
def test_extension_obeys_maximum_principle(n, rng):
    for _ in range(5):
        profile, levels = piecewise_profile(n, rng)
        r = float(rng.uniform(0.0, 0.95))
        value = axisym_extension(profile, r).value
        assert levels.min() - 1e-10 <= value <= levels.max() + 1e-10

def test_scaled_profile():
    half = sign_profile(3).scaled(0.5)
    assert half.breakpoints == (0.0,)
    assert_allclose(half([-0.3, 0.0, 0.8]), [-0.5, 0.0, 0.5])
    assert abs(axisym_extension(half, 0.5).value - 0.5 * 0.6583592135001262) <= 1e-10
