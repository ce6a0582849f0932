"""Curve data for plots: the shrinkage map and penalty-ball boundaries.

Emits plain (x, y) rows so plotting stays in external tools.  The 2-D
penalty ball is traced by 1-D root finding along rays from the origin; its
level is chosen so the boundary passes through (0, 1), which makes it
directly comparable to the unit L1 and L2 balls.
"""

import math
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .models import kl_norm, shrinkage_mean

__all__ = [
    "CurvePoint",
    "shrinkage_eta_grid",
    "shrinkage_points",
    "identity_points",
    "kl_norm_2d",
    "norm_ball_level",
    "norm_ball_boundary",
    "l1_unit_ball",
    "l2_unit_ball",
]


class CurvePoint(NamedTuple):
    x: float
    y: float


def shrinkage_eta_grid(lam: float, n_points: int = 50, frac: float = 0.9) -> np.ndarray:
    """Symmetric grid of eta values strictly inside (-sqrt(lam), sqrt(lam))."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    if not 0.0 < frac < 1.0:
        raise ValueError("frac must lie strictly inside (0, 1)")
    half_width = frac * math.sqrt(lam)
    return np.linspace(-half_width, half_width, n_points)


def shrinkage_points(lam: float, etas) -> list[CurvePoint]:
    """Shrunken posterior means over an eta grid; the grid must stay strictly
    inside the (-sqrt(lam), sqrt(lam)) domain."""
    etas = np.asarray(etas, dtype=float)
    if np.any(etas * etas >= lam):
        raise ValueError("eta grid touches the +-sqrt(lam) domain boundary")
    return [CurvePoint(float(e), shrinkage_mean(float(e), lam)) for e in etas]


def identity_points(etas) -> list[CurvePoint]:
    """The Gaussian-prior curve: the posterior mean equals eta exactly."""
    return [CurvePoint(float(e), float(e)) for e in np.asarray(etas, dtype=float)]


def kl_norm_2d(w1: float, w2: float, lam: float) -> float:
    """Two-coordinate weight penalty, used for boundary tracing."""
    return kl_norm(np.array([w1, w2]), lam)


def norm_ball_level(lam: float) -> float:
    """Level at which the 2-D penalty boundary passes through (0, 1):
    sqrt(1/lam) + sqrt(1 + 1/lam) - log(sqrt(lam + 1)/2 + 1/2) / sqrt(lam)."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    return (
        math.sqrt(1.0 / lam)
        + math.sqrt(1.0 + 1.0 / lam)
        - math.log(math.sqrt(lam + 1.0) / 2.0 + 0.5) / math.sqrt(lam)
    )


def norm_ball_boundary(lam: float, n_angles: int = 360) -> np.ndarray:
    """(n_angles, 2) points with kl_norm_2d(w1, w2) equal to the ball level.

    One bracketed root-find per ray; the penalty is strictly increasing
    along every ray, so the root is unique.  Raises RuntimeError naming the
    angle if a ray cannot be bracketed.
    """
    level = norm_ball_level(lam)
    points = np.empty((n_angles, 2))
    for i, theta in enumerate(np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)):
        cx, cy = math.cos(theta), math.sin(theta)

        def gap(r: float) -> float:
            return kl_norm_2d(r * cx, r * cy, lam) - level

        hi = 1.0
        doublings = 0
        while gap(hi) < 0.0:
            hi *= 2.0
            doublings += 1
            if doublings > 60:
                raise RuntimeError(f"no bracket for boundary ray at angle {theta:.6f}")
        radius = brentq(gap, 0.0, hi, xtol=1e-13, rtol=8.9e-16)
        points[i] = (radius * cx, radius * cy)
    return points


def l1_unit_ball(n_angles: int = 360) -> np.ndarray:
    """Boundary of the unit L1 ball (diamond), one point per ray."""
    thetas = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    radii = 1.0 / (np.abs(np.cos(thetas)) + np.abs(np.sin(thetas)))
    return np.column_stack((radii * np.cos(thetas), radii * np.sin(thetas)))


def l2_unit_ball(n_angles: int = 360) -> np.ndarray:
    """Boundary of the unit L2 ball (circle), one point per ray."""
    thetas = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    return np.column_stack((np.cos(thetas), np.sin(thetas)))
