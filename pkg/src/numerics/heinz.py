"""The extremal profile U(rN), its radial derivative V(r) and the constants C_n.

U is the harmonic extension of the hemisphere data chi_{S+} - chi_{S-}.
Along the axis::

    U(rN) = L_n r 4F3[n/2, (n-1)/2, 1/2, 1+n/4; n/4, 3/2, (1+n)/2; -r^2]
    V(r)  = K_n (1+r^2)^(-n/2) (1 + n - (n-2) r^2 2F1[1/2, 1; (3+n)/2; -r^2])
    C_n   = V(1)

with ``L_n = 2 Gamma(1+n/2) / (sqrt(pi) Gamma((1+n)/2))`` and
``K_n = Gamma(1+n/2) / (sqrt(pi) Gamma((3+n)/2))``. Gamma ratios go through
``scipy.special.gammaln`` (Cephes), accurate to about 1e-15 relative on
[0.5, 200].
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np
from scipy.special import gammaln

from src.errors import NonConvergent, UnsupportedDimension
from src.numerics.quadrature import integrate
from src.numerics.specfun import EvalResult, HypergeomSpec, gauss2f1_neg, pfq
from src.reporting.report import PointKind, VerificationPoint, VerificationReport

logger = logging.getLogger("HeinzConstants.Heinz")

SERIES_MAX_RADIUS = 0.9
ORACLE_SERIES_CUTOFF = 1e-4
ARCTAN_SERIES_CUTOFF = 0.1
SPLIT_TOLERANCE = 1e-12
RATIO_CHECK_TERMS = 100

class Profile(Enum):
    """Which extremal function a table column holds."""
    U = "U"
    V = "V"

def _check_dimension(n: int) -> None:
    if int(n) != n or n < 2:
        raise ValueError(f"Dimension must be an integer >= 2, got {n}")

def _check_radius(r: float) -> None:
    if not 0 <= r <= 1:
        raise ValueError(f"Radius must lie in [0, 1], got {r}")

def leading_coefficient(n: int) -> float:
    """Coefficient of r in U(rN), equal to V(0)."""
    return 2 * math.exp(gammaln(1 + n / 2) - gammaln((1 + n) / 2)) / math.sqrt(math.pi)

def _derivative_scale(n: int) -> float:
    return math.exp(gammaln(1 + n / 2) - gammaln((3 + n) / 2)) / math.sqrt(math.pi)

@dataclass(frozen=True)
class ProfileCoefficients:
    """Power series of U(rN) = leading * r + sum_k c_k r^(2k+1)."""
    n: int

    @property
    def leading(self) -> float:
        return leading_coefficient(self.n)

    def coefficient(self, k: int) -> float:
        """c_k = 2 (-1)^k (4k+n) Gamma(k+n/2) / ((1+2k)(2k+n-1) sqrt(pi) k! Gamma((n-1)/2))."""
        if k < 1:
            raise ValueError(f"Tail coefficients start at k = 1, got {k}")
        n = self.n
        log_mag = (gammaln(k + n / 2) - gammaln(1 + k) - gammaln((n - 1) / 2)
                   - 0.5 * math.log(math.pi))
        magnitude = 2 * (4 * k + n) * math.exp(log_mag) / ((1 + 2 * k) * (2 * k + n - 1))
        return -magnitude if k % 2 else magnitude

    def iter_tail(self) -> Iterator[float]:
        k = 1
        while True:
            yield self.coefficient(k)
            k += 1

    def u_taylor(self, r: float, terms: int = 3) -> float:
        """Truncated series of U(rN) with ``terms`` terms."""
        total = self.leading * r
        for k in range(1, terms):
            total += self.coefficient(k) * r ** (2 * k + 1)
        return total

    def v_taylor(self, r: float, terms: int = 3) -> float:
        """Truncated series of V(r) with ``terms`` terms."""
        total = self.leading
        for k in range(1, terms):
            total += (2 * k + 1) * self.coefficient(k) * r ** (2 * k)
        return total

@dataclass(frozen=True)
class MonotoneCoefficients:
    """a(m) = (1+m) Gamma(1/2+m) Gamma((3+n)/2) / (sqrt(pi) Gamma(3/2+m+n/2)).

    2F1[1/2, 2; (3+n)/2; -y] = sum_m (-1)^m a(m) y^m.
    """
    n: int

    def a(self, m: int) -> float:
        n = self.n
        log_value = (gammaln(0.5 + m) + gammaln((3 + n) / 2) - gammaln(1.5 + m + n / 2)
                     - 0.5 * math.log(math.pi))
        return (1 + m) * math.exp(log_value)

    def ratio(self, m: int) -> float:
        """a(m) / a(m+1) from the coefficients themselves."""
        return self.a(m) / self.a(m + 1)

    def closed_ratio(self, m: int) -> float:
        """a(m) / a(m+1) = (1+m)(3+2m+n) / ((2+m)(1+2m))."""
        return (1 + m) * (3 + 2 * m + self.n) / ((2 + m) * (1 + 2 * m))

def u_profile(n: int, r: float, tol: float = 1e-12, method: str = "auto") -> EvalResult:
    """U(rN), the extremal profile along the axis.

    Args:
        n: Dimension
        r: Radius in [0, 1]
        tol: Requested absolute error
        method: ``series`` (alternating 4F3 series), ``integral``
            (int_0^r V) or ``auto`` (series up to r = 0.9 while its bound
            meets ``tol``, integral otherwise)

    Returns:
        EvalResult: U(rN) with error bound
    """
    _check_dimension(n)
    _check_radius(r)
    if r == 0:
        return EvalResult(0.0, 0.0, 1)
    if method not in ("auto", "series", "integral"):
        raise ValueError(f"Unknown method {method!r}")

    if method == "series" or (method == "auto" and r <= SERIES_MAX_RADIUS):
        try:
            result = _u_series(n, r, tol)
        except NonConvergent as e:
            if method == "series":
                raise
            logger.debug(f"U series failed at n={n}, r={r} ({e}); integrating V")
        else:
            if method == "series" or result.error_bound <= tol:
                return result
            # alternating terms grow with n and cancel
            logger.debug(f"U series at n={n}, r={r} certified only to {result.error_bound:.2e}; "
                         f"integrating V")
    return _u_integral(n, r, tol)

def _u_series(n: int, r: float, tol: float) -> EvalResult:
    scale = leading_coefficient(n) * r
    spec = HypergeomSpec((n / 2, (n - 1) / 2, 0.5, 1 + n / 4), (n / 4, 1.5, (1 + n) / 2), -r * r)
    return pfq(spec, tol / scale).scaled(scale)

def _u_integral(n: int, r: float, tol: float) -> EvalResult:
    v_tol = 0.25 * tol

    def integrand(s: np.ndarray) -> np.ndarray:
        return np.array([v_profile(n, float(abs(si)), v_tol).value for si in s])

    result = integrate(integrand, (0.0, r), 0.5 * tol)
    logger.debug(f"U({r}N), n={n} by quadrature over {result.intervals} intervals")
    return EvalResult(result.value, result.error + r * v_tol, result.intervals)

def v_profile(n: int, r: float, tol: float = 1e-12) -> EvalResult:
    """V(r) = dU(rN)/dr in closed form through 2F1[1/2, 1; (3+n)/2; -r^2].

    Args:
        n: Dimension
        r: Radius in [0, 1]
        tol: Requested absolute error

    Returns:
        EvalResult: V(r) with error bound
    """
    _check_dimension(n)
    _check_radius(r)
    if r == 0:
        return EvalResult(leading_coefficient(n), 0.0, 1)
    r2 = r * r
    outer = _derivative_scale(n) * (1 + r2) ** (-n / 2)
    inner_scale = outer * abs(n - 2) * r2
    f = gauss2f1_neg(0.5, 1.0, (3 + n) / 2, -r2, tol / inner_scale if inner_scale else tol)
    value = outer * (1 + n - (n - 2) * r2 * f.value)
    return EvalResult(value, inner_scale * f.error_bound, f.terms_used)

def heinz_constant(n: int, tol: float = 1e-12) -> EvalResult:
    """The sharp constant C_n.

    C_n = n! (1 + n - (n-2) 2F1[1/2, 1; (3+n)/2; -1]) / (2^(3n/2) Gamma((1+n)/2) Gamma((3+n)/2))

    Args:
        n: Dimension, at least 2
        tol: Requested absolute error

    Returns:
        EvalResult: C_n with error bound
    """
    _check_dimension(n)
    prefactor = math.exp(gammaln(n + 1) - 1.5 * n * math.log(2)
                         - gammaln((1 + n) / 2) - gammaln((3 + n) / 2))
    inner_scale = prefactor * abs(n - 2)
    f = gauss2f1_neg(0.5, 1.0, (3 + n) / 2, -1.0, tol / inner_scale if inner_scale else tol)
    value = prefactor * (1 + n - (n - 2) * f.value)
    logger.debug(f"C_{n} = {value} ({f.terms_used} terms)")
    return EvalResult(value, inner_scale * f.error_bound, f.terms_used)

def closed_form_oracle(n: int, which, r: float) -> float:
    """Closed forms of U(rN) and V(r) for n = 2, 3, 4.

    Below r = 1e-4 the n = 3, 4 formulas are replaced by the three-term
    Taylor series, which removes their 0/0 at the origin. Above it the
    n = 3, 4 formulas are evaluated with the cancelling powers of r
    divided out, so they keep full precision down to the cutoff.

    Args:
        n: 2, 3 or 4
        which: ``Profile.U``/``"U"`` or ``Profile.V``/``"V"``
        r: Radius in [0, 1]

    Returns:
        float: Exact-formula value

    Raises:
        UnsupportedDimension: n not in {2, 3, 4}
    """
    which = Profile(which) if not isinstance(which, Profile) else which
    _check_radius(r)
    if n not in (2, 3, 4):
        raise UnsupportedDimension(f"No closed form for n = {n}")

    if n == 2:
        if which is Profile.U:
            return 4 * math.atan(r) / math.pi
        return 4 / (math.pi * (1 + r * r))

    if r < ORACLE_SERIES_CUTOFF:
        coefficients = ProfileCoefficients(n)
        return coefficients.u_taylor(r) if which is Profile.U else coefficients.v_taylor(r)

    # numerators with the leading powers of r cancelled symbolically
    r2 = r * r
    if n == 3:
        root = math.sqrt(1 + r2)
        # 1 - sqrt(1 + r^2) = -r^2 / (1 + sqrt(1 + r^2))
        if which is Profile.U:
            return r * (1 + 1 / (1 + root)) / root
        return (3 - root - 1 / (1 + root)) / (1 + r2) ** 1.5

    s = _arctan_remainder(r)
    if which is Profile.U:
        return r * (6 + 2 * r2 + 2 * (1 + r2) ** 2 * s) / (math.pi * (1 + r2))
    return 4 * (1 - r2 - (1 + r2) ** 2 * s) / (math.pi * (1 + r2) ** 2)

def _arctan_remainder(r: float) -> float:
    """(arctan r - r) / r^3, by its power series below r = 0.1."""
    if r >= ARCTAN_SERIES_CUTOFF:
        return (math.atan(r) - r) / r ** 3
    r2 = r * r
    return math.fsum((-1) ** j * r2 ** (j - 1) / (2 * j + 1) for j in range(1, 12))

def check_monotone_v(n: int, grid: Sequence[float], tol: float = 1e-12) -> VerificationReport:
    """V decreases on the grid and never drops below C_n.

    Args:
        n: Dimension
        grid: Increasing radii in [0, 1]
        tol: Evaluation tolerance; each comparison allows 2 * tol

    Returns:
        VerificationReport: One point per consecutive pair and per radius
    """
    grid = [float(r) for r in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("Grid must be strictly increasing")
    report = VerificationReport(name=f"monotone-v n={n}", metadata={'n': n, 'tol': tol})
    c_n = heinz_constant(n, tol).value
    values = [v_profile(n, r, tol).value for r in grid]

    for (r0, v0), (r1, v1) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        report.add(VerificationPoint.inequality(
            [r0, r1], v1, v0, 2 * tol, label=f"V({r1}) <= V({r0})"
        ))
    for r, v in zip(grid, values):
        report.add(VerificationPoint.inequality(
            [r], c_n, v, 2 * tol, label=f"C_{n} <= V({r})"
        ))
    return report

def check_coefficient_split(n: int, k_max: int) -> VerificationReport:
    """Split of the V-series coefficients into the 2F1 pieces, for k = 1..k_max.

    Each side is evaluated from log-gamma; the budget is a relative
    discrepancy of 1e-12.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    report = VerificationReport(name=f"coefficient-split n={n}", metadata={'n': n, 'k_max': k_max})
    log_pi = math.log(math.pi)
    for k in range(1, k_max + 1):
        sign = -1.0 if k % 2 else 1.0
        common = gammaln(k + n / 2)
        lhs = sign * 2 * (4 * k + n) / (2 * k + n - 1) * math.exp(
            common - 0.5 * log_pi - gammaln(1 + k) - gammaln((n - 1) / 2))
        first = sign * math.exp(
            n * math.log(2) + gammaln(1 + n / 2) + common - log_pi - gammaln(k + 1) - gammaln(n))
        second = sign * 2 * (n - 2) / (2 * k + n - 1) * math.exp(
            common - 0.5 * log_pi - gammaln(k) - gammaln((1 + n) / 2))
        rhs = first + second
        # compare on the relative scale
        report.add(VerificationPoint.identity(
            [n, k], 1.0, rhs / lhs, SPLIT_TOLERANCE, label=f"split n={n} k={k}"
        ))
    return report

def check_positivity_2f1(n: int, y_grid: Sequence[float], tol: float = 1e-12,
                         m_max: int = RATIO_CHECK_TERMS) -> VerificationReport:
    """a(m)/a(m+1) > 1 for m = 0..m_max and 2F1[1/2, 2; (3+n)/2; -y] > 0 on the grid."""
    report = VerificationReport(name=f"positivity-2f1 n={n}", metadata={'n': n, 'm_max': m_max})
    coefficients = MonotoneCoefficients(n)
    for m in range(m_max + 1):
        ratio = coefficients.ratio(m)
        report.add(VerificationPoint(
            x=[n, m], lhs=1.0, rhs=ratio, margin=ratio - 1.0, budget=0.0,
            label=f"a({m})/a({m + 1}) > 1", kind=PointKind.POSITIVITY
        ))
    for y in y_grid:
        if not 0 <= y <= 1:
            raise ValueError(f"y must lie in [0, 1], got {y}")
        f = gauss2f1_neg(0.5, 2.0, (3 + n) / 2, -float(y), tol)
        report.add(VerificationPoint(
            x=[n, y], lhs=0.0, rhs=f.value, margin=f.value - f.error_bound, budget=0.0,
            label=f"2F1(-{y}) > 0", kind=PointKind.POSITIVITY
        ))
    return report

def check_constants_decreasing(n_values: Sequence[int], tol: float = 1e-12) -> VerificationReport:
    """C_n decreases along the given increasing dimensions (observation)."""
    report = VerificationReport(name="constants-decreasing", metadata={'observation': True})
    constants = [heinz_constant(n, tol) for n in n_values]
    for (n0, c0), (n1, c1) in zip(zip(n_values, constants), zip(n_values[1:], constants[1:])):
        report.add(VerificationPoint.inequality(
            [n0, n1], c1.value, c0.value, c0.error_bound + c1.error_bound,
            label=f"C_{n1} <= C_{n0}"
        ))
    return report
