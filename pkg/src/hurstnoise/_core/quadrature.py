"""Graded Gauss-Legendre quadrature on (0, pi] for integrands singular at 0.

Spectral integrands behave like |lambda|^beta (beta > -1) or like powers of
log|lambda| near the origin. The rule below uses uniform Gauss-Legendre panels
on (h, pi] and geometrically shrinking panels [h/2^(i+1), h/2^i] towards 0,
down to a floor eps of a few 1e-12. The remaining piece [0, eps] is closed with
a local power-law fit F(x) ~ c x^beta estimated from F(eps) and F(eps/2).
"""

import functools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import special

from hurstnoise.constants import FREQUENCY_FLOOR, QUADRATURE_NODES, QUADRATURE_ORDER

__all__ = ["GradedRule", "graded_rule", "integrate"]

logger = logging.getLogger(__name__)

# Lower edge of the geometric panels lies in (2, 4] * FREQUENCY_FLOOR so that
# eps / 2 is still above the evaluation floor of the densities.
_GRADING_FLOOR = 4.0 * FREQUENCY_FLOOR


@dataclass(frozen=True)
class GradedRule:
    """Nodes and weights of a graded rule on (0, pi]."""

    points: np.ndarray
    weights: np.ndarray
    floor: float

    @property
    def size(self) -> int:
        return len(self.points)

    def endpoint(self, at_floor: np.ndarray, at_half_floor: np.ndarray) -> np.ndarray:
        """Integral over [0, floor] from the integrand at floor and floor / 2."""
        at_floor = np.asarray(at_floor, dtype=np.float64)
        at_half_floor = np.asarray(at_half_floor, dtype=np.float64)
        rectangle = at_floor * self.floor
        same_sign = (at_floor * at_half_floor > 0.0) & np.isfinite(at_half_floor)
        with np.errstate(divide="ignore", invalid="ignore"):
            beta = np.log2(np.abs(at_floor) / np.abs(at_half_floor))
        beta = np.clip(np.where(same_sign, beta, 0.0), -1.0 + 1e-3, None)
        return np.where(same_sign, rectangle / (beta + 1.0), rectangle)

    def integrate(self, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Integral of func over (0, pi].

        func maps an array of frequencies of shape (m,) to values of shape
        (..., m); the integral is taken along the last axis.
        """
        grid = np.concatenate([self.points, [self.floor, 0.5 * self.floor]])
        values = np.asarray(func(grid), dtype=np.float64)
        body = values[..., : self.size] @ self.weights
        return body + self.endpoint(values[..., -2], values[..., -1])


@functools.lru_cache(maxsize=32)
def graded_rule(nodes: int = QUADRATURE_NODES, order: int = QUADRATURE_ORDER) -> GradedRule:
    """Build (and cache) the graded rule with about `nodes` uniform points.

    Args:
        nodes: Number of Gauss-Legendre points on the uniform part of (0, pi].
        order: Points per panel.
    """
    if nodes < order or order < 2:
        raise ValueError(f"Invalid quadrature size: nodes={nodes}, order={order}")
    x, w = special.roots_legendre(order)
    panels = max(nodes // order, 1)
    width = math.pi / panels

    # uniform panels (width, pi] ...
    lo = width * np.arange(1, panels)
    hi = lo + width

    # ... and geometric panels towards the origin on (floor, width]
    levels = max(math.ceil(math.log2(width / _GRADING_FLOOR)), 1)
    geo_hi = width * 0.5 ** np.arange(levels)
    geo_lo = 0.5 * geo_hi
    lo = np.concatenate([geo_lo[::-1], lo])
    hi = np.concatenate([geo_hi[::-1], hi])

    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    points = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    floor = float(geo_lo[-1])
    logger.debug(
        "graded rule: %d uniform panels, %d geometric levels, floor=%.3g",
        panels - 1,
        levels,
        floor,
    )
    return GradedRule(points=points, weights=weights, floor=floor)


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    nodes: int = QUADRATURE_NODES,
    order: int = QUADRATURE_ORDER,
) -> tuple[np.ndarray, np.ndarray]:
    """Integral of func over (0, pi] and an error estimate.

    The error estimate is the difference with the rule of half the nodes,
    relative to the magnitude of the result.

    Returns:
        (value, relative_error), both with the leading shape of func's output.
    """
    value = graded_rule(nodes, order).integrate(func)
    coarse = graded_rule(max(nodes // 2, order), order).integrate(func)
    scale = np.maximum(np.abs(value), np.finfo(np.float64).tiny)
    return value, np.abs(value - coarse) / scale
