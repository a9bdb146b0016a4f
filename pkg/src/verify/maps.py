"""Boundary maps used as test subjects for the inequalities."""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.numerics.ballharmonic import AxisymProfile, BoundaryMap, sample_sphere

logger = logging.getLogger("HeinzConstants.Maps")

SUP_SAFETY = 1.05
SUP_SAMPLES = 20_000
TRIG_TERMS = 4
TRIG_FREQUENCY = 2.0
MERIDIAN_POINTS = 2001

def sign_map(n: int) -> BoundaryMap:
    """(0, ..., 0, sign(zeta_n)), the extremal map."""
    def func(zeta: np.ndarray) -> np.ndarray:
        out = np.zeros_like(zeta)
        out[:, -1] = np.sign(zeta[:, -1])
        return out
    return BoundaryMap(func, n, "sign", odd=True)

def constant_map(c: Sequence[float]) -> BoundaryMap:
    c = np.asarray(c, dtype=float)
    if np.linalg.norm(c) > 1 + 1e-12:
        raise ValueError(f"Constant {c} lies outside the closed unit ball")
    return BoundaryMap(lambda zeta: np.broadcast_to(c, zeta.shape).copy(), len(c), "constant")

def zero_map(n: int) -> BoundaryMap:
    return BoundaryMap(np.zeros_like, n, "zero", odd=True)

def identity_map(n: int) -> BoundaryMap:
    return BoundaryMap(lambda zeta: zeta.copy(), n, "identity", odd=True)

def axisym_component_map(profiles: Sequence[AxisymProfile], n: int = None) -> BoundaryMap:
    """Map whose j-th component is ``profiles[j](zeta_n)``.

    Missing trailing components are taken as zero.
    """
    n = n or profiles[0].dimension

    def func(zeta: np.ndarray) -> np.ndarray:
        out = np.zeros_like(zeta)
        for j, profile in enumerate(profiles):
            out[:, j] = profile(zeta[:, -1])
        return out
    label = "(" + ",".join(p.label for p in profiles) + ")"
    return BoundaryMap(func, n, label)

def hm_profile(n: int, m: int, literal: bool = False) -> AxisymProfile:
    """Piecewise-linear approximation h_m of sign(t).

    Both variants equal (m-1) t on [-1/m, 1/m]. The default continues
    linearly to h(+-1) = +-1, which makes h_m an increasing odd bijection
    of [-1, 1]. ``literal=True`` uses +-1 - t/m outside instead: that
    version jumps at +-1/m and stops at h(+-1) = +-(1 - 1/m).

    Args:
        n: Dimension
        m: Index, at least 2
        literal: Select the jump variant

    Returns:
        AxisymProfile: h_m with break points at +-1/m
    """
    if m < 2:
        raise ValueError(f"m must be at least 2, got {m}")
    edge = 1.0 / m

    def func(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        inner = (m - 1) * t
        if literal:
            outer = np.sign(t) - t / m
        else:
            outer = np.sign(t) * (1.0 - (1.0 - np.abs(t)) / (m - 1))
        return np.where(np.abs(t) <= edge, inner, outer)

    label = f"h_{m}{'-literal' if literal else ''}"
    return AxisymProfile(func, n, (-edge, edge), label)

@dataclass(frozen=True)
class FmBoundaryMap:
    """The sphere map f_m built from h_m.

    f_m(zeta) = sqrt(1 - h^2) / sqrt(1 - zeta_n^2) (zeta_1, ..., zeta_{n-1}, 0) + (0, ..., 0, h)
    with h = h_m(zeta_n). At the poles the first part is taken as 0.
    """
    n: int
    m: int
    literal: bool = False

    @property
    def profile(self) -> AxisymProfile:
        return hm_profile(self.n, self.m, self.literal)

    def evaluate(self, zeta: np.ndarray) -> np.ndarray:
        zeta = np.atleast_2d(np.asarray(zeta, dtype=float))
        t = zeta[:, -1]
        h = self.profile(t)
        denominator = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
        numerator = np.sqrt(np.clip(1.0 - h * h, 0.0, None))
        scale = np.divide(numerator, denominator, out=np.zeros_like(t), where=denominator > 0)
        out = zeta * scale[:, None]
        out[:, -1] = h
        return out

    def boundary_map(self) -> BoundaryMap:
        return BoundaryMap(self.evaluate, self.n, f"f_{self.m}", odd=True)

    def max_norm_defect(self, zeta: np.ndarray = None) -> float:
        """max | |f_m(zeta)| - 1 | over the given sphere points.

        f_m is axially symmetric, so by default a meridian through both
        poles is used.
        """
        if zeta is None:
            zeta = meridian_points(self.n)
        values = self.evaluate(zeta)
        return float(np.max(np.abs(np.linalg.norm(values, axis=1) - 1.0)))

def meridian_points(n: int, count: int = MERIDIAN_POINTS) -> np.ndarray:
    """(sin t, 0, ..., 0, cos t) for ``count`` angles t from 0 to pi."""
    theta = np.linspace(0.0, np.pi, count)
    zeta = np.zeros((count, n))
    zeta[:, 0] = np.sin(theta)
    zeta[:, -1] = np.cos(theta)
    return zeta

def random_trig_map(n: int, rng: np.random.Generator, odd: bool = True,
                    terms: int = TRIG_TERMS, label: str = None) -> BoundaryMap:
    """Random trigonometric polynomial map scaled into the closed ball.

    Components are ``sum_k A_jk sin(w_k . zeta)`` (plus ``B_jk cos(w_k . zeta)``
    unless ``odd``), i.e. already antisymmetrised. The sup-norm is estimated
    on 20000 random sphere points and the map is divided by 1.05 times it.
    """
    frequencies = TRIG_FREQUENCY * rng.standard_normal((terms, n))
    sine = rng.standard_normal((n, terms))
    cosine = np.zeros((n, terms)) if odd else rng.standard_normal((n, terms))

    def raw(zeta: np.ndarray) -> np.ndarray:
        phase = zeta @ frequencies.T
        return np.sin(phase) @ sine.T + np.cos(phase) @ cosine.T

    points = sample_sphere(rng, SUP_SAMPLES, n)
    sup = float(np.max(np.linalg.norm(raw(points), axis=1)))
    scale = 1.0 / (SUP_SAFETY * sup) if sup > 0 else 1.0
    logger.debug(f"Random trig map n={n}: estimated sup {sup:.4f}")
    return BoundaryMap(lambda zeta: scale * raw(zeta), n, label or "trig", odd=odd)
