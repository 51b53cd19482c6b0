"""Second divided differences and their observed convergence order.

A vector-valued function ``f(theta)`` is sampled on a uniform grid and on
two successive midpoint refinements.  Central second differences at the
interior points of the coarse grid are compared between consecutive
refinements; for smooth ``f`` the differences shrink like ``h^2``, so the
observed order ``log2(d1 / d2)`` should be close to 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BadParameter

# Differences below this (relative to the sampled values) count as exact.
NOISE_FLOOR = 1e-10


@dataclass
class SmoothnessReport:
    grid: list[float]
    step: float
    max_second_difference: list[float]
    refinement_differences: list[float]
    observed_order: float
    smooth: bool
    min_order: float
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "grid": {"start": self.grid[0], "stop": self.grid[-1], "points": len(self.grid)},
            "step": self.step,
            "max_second_difference": self.max_second_difference,
            "refinement_differences": self.refinement_differences,
            "observed_order": None if math.isnan(self.observed_order) else self.observed_order,
            "smooth": self.smooth,
            "min_order": self.min_order,
            **self.extra,
        }


def uniform_grid(start: float, stop: float, points: int) -> np.ndarray:
    if points < 3:
        raise BadParameter("a probe grid needs at least 3 points")
    if not stop > start:
        raise BadParameter("grid must be increasing")
    return np.linspace(start, stop, points)


def check_uniform(grid: Sequence[float]) -> float:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 3:
        raise BadParameter("a probe grid needs at least 3 points")
    steps = np.diff(g)
    h = float(steps[0])
    if h <= 0 or not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise BadParameter("probe grids must be uniform and increasing")
    return h


def refined(grid: Sequence[float], times: int) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    n = (g.size - 1) * 2 ** times + 1
    return np.linspace(g[0], g[-1], n)


def second_differences(values: np.ndarray, h: float, stride: int = 1) -> np.ndarray:
    """Central second differences at every ``stride``-th interior sample.

    ``values`` has one row per grid point; with ``stride = 2^r`` on an
    ``r``-times refined grid the rows returned line up with the interior
    points of the coarse grid.
    """
    v = np.asarray(values, dtype=float)
    centers = np.arange(stride, v.shape[0] - 1, stride)
    return (v[centers + 1] - 2 * v[centers] + v[centers - 1]) / (h * h)


def observed_order(func: Callable[[float], np.ndarray], grid: Sequence[float],
                   refinements: int = 2, min_order: float = 1.7) -> SmoothnessReport:
    h = check_uniform(grid)
    if refinements < 2:
        raise BadParameter("observed order needs at least two refinements")
    samples = []
    for r in range(refinements + 1):
        pts = refined(grid, r)
        vals = np.array([np.asarray(func(float(t)), dtype=float).ravel() for t in pts])
        samples.append(second_differences(vals, h / 2 ** r, stride=2 ** r))
    scale = max(1.0, max(float(np.max(np.abs(s), initial=0.0)) for s in samples))
    diffs = [float(np.max(np.abs(samples[r] - samples[r + 1]), initial=0.0))
             for r in range(refinements)]
    d1, d2 = diffs[-2], diffs[-1]
    if d1 <= NOISE_FLOOR * scale and d2 <= NOISE_FLOOR * scale:
        order = math.inf
    elif d2 == 0.0:
        order = math.inf
    else:
        order = math.log2(d1 / d2)
    base = samples[0]
    max_d2 = [float(x) for x in np.max(np.abs(base), axis=0)] if base.size else []
    bounded = all(math.isfinite(x) for x in max_d2)
    return SmoothnessReport(
        grid=[float(t) for t in np.asarray(grid, dtype=float)],
        step=h,
        max_second_difference=max_d2,
        refinement_differences=diffs,
        observed_order=order,
        smooth=bounded and order >= min_order,
        min_order=min_order,
    )


def oblique_projection_curve(theta: float) -> np.ndarray:
    """Entries of the projection of R^2 onto ``span{e1}`` along ``span{(cos t, sin t)}``."""
    from .linalg import Subspace, oblique_projection_mp

    u0 = Subspace(np.array([[1.0], [0.0]]))
    w = Subspace(np.array([[math.cos(theta)], [math.sin(theta)]]))
    return oblique_projection_mp(u0, w)


__all__ = [
    "SmoothnessReport",
    "check_uniform",
    "oblique_projection_curve",
    "observed_order",
    "refined",
    "second_differences",
    "uniform_grid",
]
