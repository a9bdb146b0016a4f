import math

import mpmath
import pytest
from numpy.testing import assert_allclose

from src.errors import UnsupportedDimension
from src.numerics.heinz import (MonotoneCoefficients, Profile, ProfileCoefficients,
                                check_coefficient_split, check_constants_decreasing,
                                check_monotone_v, check_positivity_2f1, closed_form_oracle,
                                heinz_constant, leading_coefficient, u_profile, v_profile)

ORACLE_RADII = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]

@pytest.mark.parametrize("n", [2, 3, 4])
def test_heinz_constant_closed_forms(n, reference_constants):
    result = heinz_constant(n)
    assert abs(result.value - reference_constants[n]) <= 1e-12

def test_heinz_constant_matches_mpmath_for_larger_dimensions():
    for n in (5, 9, 20):
        expected = (mpmath.factorial(n) * (1 + n - (n - 2) * mpmath.hyp2f1(0.5, 1, (3 + n) / 2.0, -1))
                    / (mpmath.mpf(2) ** (1.5 * n) * mpmath.gamma((1 + n) / 2.0) * mpmath.gamma((3 + n) / 2.0)))
        assert abs(heinz_constant(n).value - float(expected)) <= 1e-12

def test_heinz_constant_equals_v_at_one():
    for n in (2, 5, 11):
        assert abs(heinz_constant(n).value - v_profile(n, 1.0).value) <= 1e-12

def test_heinz_constant_rejects_dimension_one():
    with pytest.raises(ValueError):
        heinz_constant(1)

@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("r", ORACLE_RADII)
def test_profiles_match_closed_forms(n, r):
    assert abs(u_profile(n, r).value - closed_form_oracle(n, Profile.U, r)) <= 1e-10
    assert abs(v_profile(n, r).value - closed_form_oracle(n, Profile.V, r)) <= 1e-10

def test_profile_examples():
    assert abs(u_profile(2, 0.5).value - 4 * math.atan(0.5) / math.pi) <= 1e-11
    n4 = (2 * 0.5 * (-0.75) + 2 * 1.25 ** 2 * math.atan(0.5)) / (math.pi * 0.25 * 1.25)
    assert abs(u_profile(4, 0.5).value - n4) <= 1e-11
    assert n4 == pytest.approx(0.71189245, abs=1e-8)
    assert u_profile(7, 0.0).value == 0.0
    assert abs(v_profile(2, 0.0).value - 4 / math.pi) <= 1e-12
    assert abs(v_profile(2, 0.5).value - 4 / (math.pi * 1.25)) <= 1e-12
    assert abs(v_profile(3, 1.0).value - (math.sqrt(2) - 1)) <= 1e-12

@pytest.mark.parametrize("n", [2, 3, 6])
def test_u_methods_agree(n):
    for r in (0.3, 0.85):
        series = u_profile(n, r, method="series").value
        integral = u_profile(n, r, method="integral").value
        assert abs(series - integral) <= 1e-10

def test_u_at_one_is_one():
    for n in (2, 3, 5):
        assert abs(u_profile(n, 1.0).value - 1.0) <= 1e-10

def test_u_profile_argument_checks():
    with pytest.raises(ValueError):
        u_profile(3, 1.2)
    with pytest.raises(ValueError):
        u_profile(3, 0.5, method="fast")

def test_oracle_examples(reference_constants):
    assert abs(closed_form_oracle(3, "U", 0.5) - 0.6583592135) <= 1e-9
    assert abs(closed_form_oracle(4, "V", 1.0) - reference_constants[4]) <= 1e-14
    assert closed_form_oracle(2, "U", 0.0) == 0.0

def test_oracle_is_continuous_at_taylor_cutoff():
    for n in (3, 4):
        for which in ("U", "V"):
            below = closed_form_oracle(n, which, 1e-4 * (1 - 1e-9))
            above = closed_form_oracle(n, which, 1e-4 * (1 + 1e-9))
            assert abs(below - above) <= 1e-7

@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("r", [1.5e-4, 2e-4, 1e-3, 5e-3, 0.05, 0.099, 0.101, 0.3])
def test_oracle_keeps_precision_near_origin(n, r):
    assert abs(closed_form_oracle(n, "V", r) - v_profile(n, r).value) <= 1e-12
    u = u_profile(n, r)
    assert abs(closed_form_oracle(n, "U", r) - u.value) <= 1e-14 + u.error_bound

def test_oracle_rejects_other_dimensions():
    with pytest.raises(UnsupportedDimension):
        closed_form_oracle(5, "U", 0.5)

def test_profile_coefficients():
    coefficients = ProfileCoefficients(2)
    assert coefficients.leading == pytest.approx(4 / math.pi)
    # 4/pi arctan r = 4/pi (r - r^3/3 + r^5/5 ...)
    assert coefficients.coefficient(1) == pytest.approx(-4 / (3 * math.pi))
    assert coefficients.coefficient(2) == pytest.approx(4 / (5 * math.pi))
    tail = coefficients.iter_tail()
    assert next(tail) == pytest.approx(coefficients.coefficient(1))
    assert leading_coefficient(3) == pytest.approx(1.5)

def test_monotone_coefficients():
    coefficients = MonotoneCoefficients(2)
    assert coefficients.ratio(0) == pytest.approx(2.5)
    assert coefficients.closed_ratio(0) == pytest.approx(2.5)
    for m in range(30):
        assert coefficients.ratio(m) == pytest.approx(coefficients.closed_ratio(m), rel=1e-12)

def test_monotone_coefficients_match_series():
    n, y = 5, 0.3
    coefficients = MonotoneCoefficients(n)
    partial = sum((-1) ** m * coefficients.a(m) * y ** m for m in range(80))
    assert_allclose(partial, float(mpmath.hyp2f1(0.5, 2, (3 + n) / 2.0, -y)), rtol=1e-12)

@pytest.mark.parametrize("n", [2, 7])
def test_check_monotone_v_passes(n):
    grid = [round(0.05 * i, 12) for i in range(21)]
    report = check_monotone_v(n, grid)
    assert report.passed
    assert len(report.points) == 20 + 21

def test_check_monotone_v_single_point():
    report = check_monotone_v(3, [0.5])
    assert report.passed
    assert len(report.points) == 1

def test_check_monotone_v_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        check_monotone_v(3, [0.5, 0.2])

@pytest.mark.parametrize("n, k_max", [(3, 30), (2, 30), (6, 50), (10, 50)])
def test_coefficient_split(n, k_max):
    report = check_coefficient_split(n, k_max)
    assert report.passed
    assert len(report.points) == k_max

def test_positivity_examples():
    report = check_positivity_2f1(3, [0.0, 0.25, 1.0])
    assert report.passed
    assert all(point.rhs > 0 for point in report.points)
    ratios = check_positivity_2f1(2, [], m_max=0)
    assert ratios.points[0].rhs == pytest.approx(2.5)
    at_zero = check_positivity_2f1(10, [0.0], m_max=0)
    assert at_zero.points[-1].rhs == 1.0

def test_constants_decrease():
    report = check_constants_decreasing(list(range(2, 13)))
    assert report.passed
    assert len(report.points) == 10

@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_v_is_derivative_of_u(n):
    step = 1e-5
    for r in [0.05 + 0.1 * i for i in range(10)]:
        difference = (u_profile(n, r + step).value - u_profile(n, r - step).value) / (2 * step)
        assert abs(difference - v_profile(n, r).value) <= 1e-6

@pytest.mark.parametrize("n", [20, 40])
def test_u_series_bound_covers_cancellation(n):
    series = u_profile(n, 0.9, method="series")
    with mpmath.workdps(40):
        exact = (leading_coefficient(n) * 0.9 * mpmath.hyper(
            [n / 2, (n - 1) / 2, 0.5, 1 + n / 4], [n / 4, 1.5, (1 + n) / 2], -mpmath.mpf(0.9 * 0.9)))
    assert abs(series.value - float(exact)) <= series.error_bound
    assert series.error_bound > 1e-12
    assert abs(u_profile(n, 0.9).value - float(exact)) <= 1e-11
