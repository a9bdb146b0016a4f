"""Globally adaptive Gauss-Legendre quadrature.

Each subinterval is integrated with a 15-point and a 7-point Gauss-Legendre
rule; their difference is the subinterval's error estimate. The interval
with the largest estimate is bisected until the summed estimate meets the
tolerance.
"""

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from src.errors import QuadratureFailure

logger = logging.getLogger("HeinzConstants.Quadrature")

MAX_INTERVALS = 4000
# round-off floor relative to the integral of |f|
ROUNDOFF_FACTOR = 50 * np.finfo(float).eps

_NODES_15, _WEIGHTS_15 = leggauss(15)
_NODES_7, _WEIGHTS_7 = leggauss(7)

Integrand = Callable[[np.ndarray], np.ndarray]

@dataclass(frozen=True)
class QuadResult:
    """Integral estimate, error estimate and number of subintervals."""
    value: float
    error: float
    intervals: int

def _rule(f: Integrand, a: float, b: float) -> Tuple[float, float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y15 = np.asarray(f(mid + half * _NODES_15), dtype=float)
    y7 = np.asarray(f(mid + half * _NODES_7), dtype=float)
    g15 = half * float(np.dot(_WEIGHTS_15, y15))
    g7 = half * float(np.dot(_WEIGHTS_7, y7))
    l1 = abs(half) * float(np.dot(_WEIGHTS_15, np.abs(y15)))
    return g15, abs(g15 - g7), l1

def integrate(f: Integrand, points: Iterable[float], tol: float,
              max_intervals: int = MAX_INTERVALS) -> QuadResult:
    """Integrate ``f`` over ``[min(points), max(points)]``.

    Args:
        f: Vectorised integrand
        points: Interval end points plus interior break points (kinks,
            jumps, peaks); duplicates are ignored
        tol: Absolute tolerance on the summed error estimate
        max_intervals: Bisection budget

    Returns:
        QuadResult: Integral and error estimate

    Raises:
        QuadratureFailure: the budget ran out before the tolerance was met
    """
    edges = sorted(set(float(p) for p in points))
    if len(edges) < 2:
        return QuadResult(0.0, 0.0, 0)

    heap: List[Tuple[float, float, float, float, float]] = []
    total = 0.0
    error = 0.0
    l1 = 0.0
    for a, b in zip(edges, edges[1:]):
        value, err, mass = _rule(f, a, b)
        heapq.heappush(heap, (-err, a, b, value, mass))
        total += value
        error += err
        l1 += mass

    while error > max(tol, ROUNDOFF_FACTOR * l1):
        if len(heap) >= max_intervals:
            raise QuadratureFailure(
                f"Quadrature error {error:.2e} above tol {tol:.1e} after {len(heap)} intervals"
            )
        neg_err, a, b, value, mass = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not a < mid < b:
            raise QuadratureFailure(f"Interval [{a}, {b}] cannot be bisected further")
        left = _rule(f, a, mid)
        right = _rule(f, mid, b)
        heapq.heappush(heap, (-left[1], a, mid, left[0], left[2]))
        heapq.heappush(heap, (-right[1], mid, b, right[0], right[2]))
        # refresh sums from the heap to avoid cancellation drift
        total = math.fsum(item[3] for item in heap)
        error = math.fsum(-item[0] for item in heap)
        l1 = math.fsum(item[4] for item in heap)

    logger.debug(f"Quadrature converged: {len(heap)} intervals, error {error:.2e}")
    return QuadResult(total, error, len(heap))
