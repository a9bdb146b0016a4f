"""Numerical checks of the harmonic Schwarz lemma, the ratio bound and sharpness of C_n."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import CenterNotZero
from src.numerics.ballharmonic import (AxisymProfile, BallPoint, BoundaryMap, axisym_extension,
                                       axisym_radial_derivative, bounds_of, mc_extension,
                                       sign_profile, values_of)
from src.numerics.heinz import heinz_constant, u_profile
from src.reporting.report import VerificationPoint, VerificationReport
from src.verify.maps import FmBoundaryMap, axisym_component_map, meridian_points

logger = logging.getLogger("HeinzConstants.Verify")

SWEEP_MONOTONE_FROM = 10
LIMIT_TOLERANCE = 1e-3
FD_STEP = 1e-5
NORM_DEFECT_WARNING = 1e-9

@dataclass(frozen=True)
class SchwarzCenteringFactor:
    """(1 - r^2) / (1 + r^2)^(n/2), the weight of u(0) in the Schwarz bound."""
    n: int

    def __call__(self, r: float) -> float:
        return (1.0 - r * r) / (1.0 + r * r) ** (self.n / 2)

def verify_generalized_schwarz(bmap: BoundaryMap, grid: Sequence[BallPoint], samples: int,
                               seed: int, tol: float = 1e-12) -> VerificationReport:
    """Check |u(x) - (1-|x|^2)/(1+|x|^2)^(n/2) u(0)| <= U(|x| N) with u = P[f].

    u is estimated by Monte Carlo; the statistical bounds of u(x) and u(0)
    enter the budget through the triangle inequality.

    Args:
        bmap: Boundary map into the closed ball
        grid: Points with |x| <= 0.95
        samples: Monte Carlo samples per evaluation
        seed: Sampling seed
        tol: Tolerance for U

    Returns:
        VerificationReport: One point per grid point
    """
    n = bmap.dimension
    centering = SchwarzCenteringFactor(n)
    report = VerificationReport(
        name=f"schwarz {bmap.label} n={n}",
        metadata={'map': bmap.label, 'n': n, 'samples': samples, 'seed': seed}
    )
    center = mc_extension(bmap, BallPoint((0.0,) * n), samples, seed)
    u0 = values_of(center)
    u0_bound = float(np.linalg.norm(bounds_of(center)))

    for x in grid:
        r = x.norm
        estimate = mc_extension(bmap, x, samples, seed)
        weight = centering(r)
        lhs = float(np.linalg.norm(values_of(estimate) - weight * u0))
        profile = u_profile(n, min(r, 1.0), tol)
        budget = float(np.linalg.norm(bounds_of(estimate))) + weight * u0_bound + profile.error_bound
        report.add(VerificationPoint.inequality(
            x.coords, lhs, profile.value, budget, label=f"{bmap.label} |x|={r:.6g}"
        ))
    return report

def verify_ratio_bound(bmap: BoundaryMap, r_grid: Sequence[float], direction: Sequence[float],
                       samples: int, seed: int, tol: float = 1e-12) -> VerificationReport:
    """Check (1 - |u(r zeta)|) / (1 - r) >= C_n for a map with u(0) = 0.

    Raises:
        CenterNotZero: the estimated |u(0)| exceeds its statistical bound
    """
    n = bmap.dimension
    center = mc_extension(bmap, BallPoint((0.0,) * n), samples, seed)
    u0_norm = float(np.linalg.norm(values_of(center)))
    u0_bound = float(np.linalg.norm(bounds_of(center)))
    if u0_norm > u0_bound:
        raise CenterNotZero(f"|u(0)| = {u0_norm:.3e} exceeds budget {u0_bound:.3e} for {bmap.label}")

    c_n = heinz_constant(n, tol)
    report = VerificationReport(
        name=f"ratio {bmap.label} n={n}",
        metadata={'map': bmap.label, 'n': n, 'samples': samples, 'seed': seed, 'C_n': c_n.value}
    )
    for r in r_grid:
        x = BallPoint.along(direction, r)
        estimate = mc_extension(bmap, x, samples, seed)
        ratio = (1.0 - float(np.linalg.norm(values_of(estimate)))) / (1.0 - r)
        budget = float(np.linalg.norm(bounds_of(estimate))) / (1.0 - r) + c_n.error_bound
        report.add(VerificationPoint.inequality(
            x.coords, c_n.value, ratio, budget, label=f"{bmap.label} r={r:.6g}"
        ))
    return report

@dataclass
class SweepRow:
    """One radial-derivative estimate d(n, m, r); ``m=None`` is the limit profile."""
    m: Optional[int]
    r: float
    estimate: float
    error: float

@dataclass
class SharpnessTable:
    """Radial derivatives of the last component of u_m = P[f_m] at rN."""
    n: int
    c_n: float
    rows: List[SweepRow] = field(default_factory=list)
    tol: float = 1e-9
    literal: bool = False
    # max | |f_m| - 1 | on a meridian, by m
    norm_defects: Dict[int, float] = field(default_factory=dict)

    @property
    def infimum(self) -> float:
        return min(row.estimate for row in self.rows)

    def estimates(self, m: Optional[int]) -> Dict[float, SweepRow]:
        return {row.r: row for row in self.rows if row.m == m}

    def extrapolated_limit(self) -> Optional[float]:
        """Linear extrapolation to r = 1 in (1 - r) from the two largest radii of the limit profile."""
        limit_rows = sorted(self.estimates(None).values(), key=lambda row: row.r)
        if len(limit_rows) < 2:
            return None
        near, nearest = limit_rows[-2], limit_rows[-1]
        s_near, s_nearest = 1.0 - near.r, 1.0 - nearest.r
        slope = (near.estimate - nearest.estimate) / (s_near - s_nearest)
        return nearest.estimate - slope * s_nearest

    def monotone_pairs(self) -> List[Tuple[SweepRow, SweepRow]]:
        """Consecutive (m, m') pairs at equal r with m, m' beyond 10."""
        ms = sorted({row.m for row in self.rows if row.m is not None and row.m > SWEEP_MONOTONE_FROM})
        pairs = []
        for m0, m1 in zip(ms, ms[1:]):
            first, second = self.estimates(m0), self.estimates(m1)
            pairs.extend((first[r], second[r]) for r in sorted(first) if r in second)
        return pairs

    def norm_defect_metadata(self) -> Dict[str, float]:
        return {str(m): defect for m, defect in sorted(self.norm_defects.items())}

    def to_report(self) -> VerificationReport:
        report = VerificationReport(
            name=f"sharpness n={self.n}",
            metadata={'n': self.n, 'C_n': self.c_n, 'tol': self.tol, 'literal': self.literal,
                      'norm_defect': self.norm_defect_metadata()}
        )
        for row in self.rows:
            label = "limit" if row.m is None else f"m={row.m}"
            report.add(VerificationPoint.inequality(
                [row.r], self.c_n, row.estimate, row.error + self.tol, label=f"{label} r={row.r}"
            ))
        for first, second in self.monotone_pairs():
            report.add(VerificationPoint.inequality(
                [first.r], second.estimate, first.estimate, first.error + second.error + 2 * self.tol,
                label=f"d(m={second.m}) <= d(m={first.m}) r={first.r}"
            ))
        limit = self.extrapolated_limit()
        if limit is not None:
            report.add(VerificationPoint.identity(
                [1.0], limit, self.c_n, LIMIT_TOLERANCE, label="extrapolated limit"
            ))
        return report

def sharpness_sweep(n: int, m_list: Sequence[int], r_list: Sequence[float], tol: float = 1e-9,
                    include_limit: bool = True, literal: bool = False) -> SharpnessTable:
    """Radial derivative of the last component of u_m at rN for each (m, r).

    The last component of f_m is h_m(zeta_n), so its extension along the
    axis is an axially symmetric quadrature. The limit profile sign(t) is
    added as ``m=None``.

    Args:
        n: Dimension
        m_list: Indices m >= 2
        r_list: Radii in [0.9, 1)
        tol: Quadrature tolerance
        include_limit: Also evaluate the limit profile
        literal: Use the jump variant of h_m

    Returns:
        SharpnessTable: Estimates, C_n and derived checks
    """
    c_n = heinz_constant(n).value
    table = SharpnessTable(n=n, c_n=c_n, tol=tol, literal=literal)
    profiles: List[Tuple[Optional[int], AxisymProfile]] = []
    for m in m_list:
        fm = FmBoundaryMap(n, m, literal)
        table.norm_defects[m] = fm.max_norm_defect()
        if table.norm_defects[m] > NORM_DEFECT_WARNING:
            logger.warning(f"f_{m} leaves the sphere by up to {table.norm_defects[m]:.3g} (literal={literal})")
        # the last component of f_m is h_m(zeta_n)
        profiles.append((m, fm.profile))
    if include_limit:
        profiles.append((None, sign_profile(n)))
    for m, profile in profiles:
        for r in r_list:
            result = axisym_radial_derivative(profile, r, tol)
            table.rows.append(SweepRow(m, float(r), result.value, result.error_bound))
            logger.debug(f"d(n={n}, m={m}, r={r}) = {result.value:.10f}")
    logger.info(f"Sharpness sweep n={n}: infimum {table.infimum:.8f}, C_n {c_n:.8f}")
    return table

def verify_norm_derivative_inequality(components: Sequence[AxisymProfile], r: float,
                                      tol: float = 1e-6, step: float = FD_STEP,
                                      label: str = "axisym") -> VerificationPoint:
    """Check |d/dr u(rN)| >= d/dr |u(rN)| for a map with axially symmetric components.

    The left side is differentiated under the integral; the right side is
    a centered finite difference of |u| along the axis.

    Args:
        components: Profiles of the components that are nonzero along the axis
        r: Radius in (0, 0.95]
        tol: Allowed negative margin
        step: Finite-difference step
        label: Name used in the report

    Returns:
        VerificationPoint: margin = |u_r| - d|u|/dr

    Raises:
        CenterNotZero: u(0) != 0
    """
    if not 0 < r <= 0.95:
        raise ValueError(f"r must lie in (0, 0.95], got {r}")
    quad_tol = 1e-12
    center = math.sqrt(sum(axisym_extension(p, 0.0, quad_tol).value ** 2 for p in components))
    if center > tol:
        raise CenterNotZero(f"|u(0)| = {center:.3e} for {label}")

    def norm_at(radius: float) -> float:
        return math.sqrt(sum(axisym_extension(p, radius, quad_tol).value ** 2 for p in components))

    derivative = [axisym_radial_derivative(p, r, quad_tol).value for p in components]
    lhs = math.sqrt(sum(d * d for d in derivative))
    rhs = (norm_at(r + step) - norm_at(r - step)) / (2 * step)
    return VerificationPoint.inequality([r], rhs, lhs, tol, label=f"{label} r={r}")

def verify_into_ball(components: Sequence[AxisymProfile], label: str = "axisym",
                     tol: float = 1e-12) -> VerificationPoint:
    """max |f| <= 1 on a meridian for the map with the given axially symmetric components."""
    bmap = axisym_component_map(components)
    values = bmap(meridian_points(bmap.dimension))
    sup = float(np.max(np.linalg.norm(values, axis=1)))
    return VerificationPoint.inequality([bmap.dimension], sup, 1.0, tol, label=f"{label} into ball")
