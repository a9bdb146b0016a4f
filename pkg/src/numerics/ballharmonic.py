"""Poisson kernel and harmonic extension on the unit ball B^n.

Axially symmetric boundary data h(zeta_n) reduce the Poisson integral at
``rN`` to a single integral over the polar angle::

    P[h](rN) = c_n * int_0^pi (1 - r^2) sin^(n-2)(t) h(cos t) / D(t)^(n/2) dt
    D(t)     = 1 + r^2 - 2 r cos t = (1 - r)^2 + 4 r sin^2(t / 2)
    c_n      = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))

General boundary maps are extended by Monte Carlo over uniform points on
S^(n-1). Sampling uses numpy's PCG64 generator: ``SeedSequence(seed)``
spawns one child per chunk of 8192 antithetic pairs (zeta, -zeta), and
points are normalised standard Gaussian vectors. Chunks are evaluated in
parallel and concatenated in chunk order, so results are independent of
the number of worker threads.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from src.errors import InsufficientSamples, PointOnBoundary, TooCloseToBoundary
from src.numerics.quadrature import integrate
from src.numerics.specfun import EvalResult
from src.utils.workers import chunk_generators, ordered_map

logger = logging.getLogger("HeinzConstants.BallHarmonic")

MC_RADIUS_GUARD = 0.95
MIN_SAMPLES = 1000
CHUNK_PAIRS = 8192
# multiples of (1 - r) at which the polar integral is split near the peak
PEAK_SPLITS = (1.0, 4.0, 16.0, 64.0)
SIGMA_FACTOR = 3.0

@dataclass(frozen=True)
class BallPoint:
    """A point of R^n, usually inside the unit ball."""
    coords: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coords', tuple(float(c) for c in self.coords))
        if len(self.coords) < 2:
            raise ValueError(f"Dimension must be at least 2, got {len(self.coords)}")

    @classmethod
    def on_axis(cls, n: int, r: float) -> 'BallPoint':
        """The point ``r N`` with ``N = (0, ..., 0, 1)``."""
        return cls((0.0,) * (n - 1) + (float(r),))

    @classmethod
    def along(cls, direction: Sequence[float], r: float) -> 'BallPoint':
        """The point ``r * direction / |direction|``."""
        v = np.asarray(direction, dtype=float)
        return cls(tuple(r * v / np.linalg.norm(v)))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

@dataclass(frozen=True)
class AxisymProfile:
    """Boundary data on S^(n-1) depending only on the last coordinate.

    Attributes:
        func: Vectorised map t -> h(t) on [-1, 1]
        dimension: Ambient dimension n
        breakpoints: Values of t where h jumps or kinks
        label: Name used in reports
    """
    func: Callable[[np.ndarray], np.ndarray]
    dimension: int
    breakpoints: Tuple[float, ...] = ()
    label: str = "profile"

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    def combine(self, alpha: float, other: 'AxisymProfile', beta: float) -> 'AxisymProfile':
        """The profile ``alpha * self + beta * other``."""
        return AxisymProfile(
            func=lambda t: alpha * self.func(t) + beta * other.func(t),
            dimension=self.dimension,
            breakpoints=tuple(sorted(set(self.breakpoints) | set(other.breakpoints))),
            label=f"{alpha}*{self.label}+{beta}*{other.label}"
        )

    def scaled(self, alpha: float) -> 'AxisymProfile':
        """The profile ``alpha * self``."""
        return AxisymProfile(
            func=lambda t: alpha * self.func(t),
            dimension=self.dimension,
            breakpoints=self.breakpoints,
            label=f"{alpha:g}*{self.label}"
        )

def sign_profile(n: int) -> AxisymProfile:
    """Extremal data chi_{S+} - chi_{S-}; the equator maps to 0."""
    return AxisymProfile(np.sign, n, (0.0,), "sign")

def linear_profile(n: int) -> AxisymProfile:
    """h(t) = t, the last component of the identity map."""
    return AxisymProfile(lambda t: np.array(t, dtype=float), n, (), "t")

def constant_profile(n: int, value: float = 1.0) -> AxisymProfile:
    return AxisymProfile(lambda t: np.full_like(t, value, dtype=float), n, (), f"const({value})")

@dataclass(frozen=True)
class BoundaryMap:
    """A map S^(n-1) -> closed unit ball of R^n.

    Attributes:
        func: Vectorised map from an (m, n) array of sphere points to an
            (m, n) array of values
        dimension: n
        label: Name used in reports
        odd: Whether f(-zeta) = -f(zeta)
    """
    func: Callable[[np.ndarray], np.ndarray]
    dimension: int
    label: str = "map"
    odd: bool = False

    def __call__(self, zeta: np.ndarray) -> np.ndarray:
        zeta = np.atleast_2d(np.asarray(zeta, dtype=float))
        return np.asarray(self.func(zeta), dtype=float).reshape(zeta.shape[0], self.dimension)

    def rotated(self, rotation: np.ndarray) -> 'BoundaryMap':
        """The map ``zeta -> f(O zeta)``."""
        rotation = np.asarray(rotation, dtype=float)
        return BoundaryMap(lambda z: self.func(z @ rotation.T), self.dimension,
                           f"{self.label}@O", self.odd)

def poisson_kernel(x: BallPoint, zeta: Sequence[float]) -> float:
    """P(x, zeta) = (1 - |x|^2) / |x - zeta|^n.

    Args:
        x: Interior point
        zeta: Boundary direction, normalised to unit length

    Returns:
        float: Kernel value, strictly positive

    Raises:
        PointOnBoundary: |x| >= 1
    """
    values = poisson_kernel_batch(x, np.atleast_2d(np.asarray(zeta, dtype=float)))
    return float(values[0])

def poisson_kernel_batch(x: BallPoint, zetas: np.ndarray) -> np.ndarray:
    """Kernel values for each row of ``zetas`` (rows are normalised)."""
    norm = x.norm
    if norm >= 1:
        raise PointOnBoundary(f"Poisson kernel needs |x| < 1, got {norm}")
    zetas = zetas / np.linalg.norm(zetas, axis=1, keepdims=True)
    distance = np.linalg.norm(zetas - x.array(), axis=1)
    return (1.0 - norm * norm) / distance ** x.dimension

def sphere_constant(n: int) -> float:
    """c_n = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)), the polar weight normaliser."""
    return math.exp(gammaln(n / 2) - gammaln((n - 1) / 2)) / math.sqrt(math.pi)

def _polar_points(profile: AxisymProfile, r: float) -> List[float]:
    points = [0.0, math.pi]
    points.extend(math.acos(t) for t in profile.breakpoints if -1 <= t <= 1)
    if r > 0:
        points.extend(s * (1 - r) for s in PEAK_SPLITS if s * (1 - r) < math.pi)
    return points

def _check_radius(r: float) -> None:
    if not 0 <= r < 1:
        raise PointOnBoundary(f"Radius must lie in [0, 1), got {r}")

def axisym_extension(profile: AxisymProfile, r: float, tol: float = 1e-12) -> EvalResult:
    """Harmonic extension of axially symmetric data at ``rN``.

    Args:
        profile: Boundary data h(zeta_n)
        r: Radius in [0, 1)
        tol: Absolute quadrature tolerance

    Returns:
        EvalResult: P[h](rN) and its quadrature error estimate
    """
    _check_radius(r)
    n = profile.dimension
    weight = sphere_constant(n)
    one_minus = 1.0 - r * r

    def integrand(theta: np.ndarray) -> np.ndarray:
        half_sin = np.sin(0.5 * theta)
        d = (1.0 - r) ** 2 + 4.0 * r * half_sin * half_sin
        return weight * one_minus * np.sin(theta) ** (n - 2) * profile(np.cos(theta)) / d ** (n / 2)

    result = integrate(integrand, _polar_points(profile, r), tol)
    logger.debug(f"P[{profile.label}]({r}N), n={n}: {result.value} +- {result.error:.1e}")
    return EvalResult(result.value, result.error, max(result.intervals, 1))

def axisym_radial_derivative(profile: AxisymProfile, r: float, tol: float = 1e-12) -> EvalResult:
    """Radial derivative d/dr P[h](rN), differentiated under the integral.

    The r-derivative of the kernel is
    ``(-2 r D - n (1 - r^2)(r - cos t)) / D^(n/2 + 1)``.
    """
    _check_radius(r)
    n = profile.dimension
    weight = sphere_constant(n)
    one_minus = 1.0 - r * r

    def integrand(theta: np.ndarray) -> np.ndarray:
        half_sin = np.sin(0.5 * theta)
        versine = 2.0 * half_sin * half_sin
        d = (1.0 - r) ** 2 + 2.0 * r * versine
        r_minus_cos = versine - (1.0 - r)
        kernel = (-2.0 * r * d - n * one_minus * r_minus_cos) / d ** (n / 2 + 1)
        return weight * np.sin(theta) ** (n - 2) * profile(np.cos(theta)) * kernel

    result = integrate(integrand, _polar_points(profile, r), tol)
    logger.debug(f"d/dr P[{profile.label}]({r}N), n={n}: {result.value} +- {result.error:.1e}")
    return EvalResult(result.value, result.error, max(result.intervals, 1))

def sample_sphere(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """Uniform points on S^(n-1) from normalised Gaussian vectors."""
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)

def _pair_means(bmap: BoundaryMap, x: BallPoint, rng: np.random.Generator, pairs: int) -> np.ndarray:
    zeta = sample_sphere(rng, pairs, x.dimension)
    plus = poisson_kernel_batch(x, zeta)[:, None] * bmap(zeta)
    minus = poisson_kernel_batch(x, -zeta)[:, None] * bmap(-zeta)
    return 0.5 * (plus + minus)

def mc_extension(bmap: BoundaryMap, x: BallPoint, samples: int, seed: int,
                 threads: Optional[int] = None) -> List[EvalResult]:
    """Monte Carlo estimate of P[f](x), one result per component.

    Args:
        bmap: Boundary map f
        x: Evaluation point, |x| <= 0.95
        samples: Number of sphere points (rounded up to an even count)
        seed: Seed of the PCG64 substreams
        threads: Worker threads (default: ``HEINZ_THREADS`` / CPU count)

    Returns:
        List[EvalResult]: Component estimates with 3-sigma error bounds

    Raises:
        TooCloseToBoundary: |x| > 0.95
        InsufficientSamples: samples < 1000
    """
    if x.norm > MC_RADIUS_GUARD + 1e-12:
        raise TooCloseToBoundary(f"|x| = {x.norm:.4f} exceeds the Monte Carlo guard {MC_RADIUS_GUARD}")
    if samples < MIN_SAMPLES:
        raise InsufficientSamples(f"Need at least {MIN_SAMPLES} samples, got {samples}")
    if x.dimension != bmap.dimension:
        raise ValueError(f"Point dimension {x.dimension} does not match map dimension {bmap.dimension}")

    pairs = (samples + 1) // 2
    sizes = [CHUNK_PAIRS] * (pairs // CHUNK_PAIRS)
    if pairs % CHUNK_PAIRS:
        sizes.append(pairs % CHUNK_PAIRS)
    jobs = list(zip(chunk_generators(seed, len(sizes)), sizes))
    chunks = ordered_map(lambda job: _pair_means(bmap, x, job[0], job[1]), jobs, threads)
    values = np.concatenate(chunks, axis=0)

    mean = values.mean(axis=0)
    spread = values.std(axis=0, ddof=1)
    bounds = SIGMA_FACTOR * spread / math.sqrt(pairs)
    logger.debug(f"MC P[{bmap.label}] at |x|={x.norm:.3f}: {2 * pairs} samples, max bound {bounds.max():.2e}")
    return [EvalResult(float(m), float(b), 2 * pairs) for m, b in zip(mean, bounds)]

def values_of(results: Sequence[EvalResult]) -> np.ndarray:
    return np.array([res.value for res in results])

def bounds_of(results: Sequence[EvalResult]) -> np.ndarray:
    return np.array([res.error_bound for res in results])
