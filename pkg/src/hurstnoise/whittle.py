"""Whittle contrast of pre-averaged increments and its minimisation over (H, nu).

The contrast

    U(H, nu) = (1/4 pi) int_{-pi}^{pi} log g(lam) + I_N(lam) / g(lam) dlam,
    g = nu^2 f_{H,k} + (tau^2 / k) l,

is approximated by the Riemann sum over the nonzero Fourier frequencies
2 pi j / N (folded onto the positive ones by evenness). The minimiser is
searched on a coarse (H, log nu) grid and refined by bounded Nelder-Mead.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from hurstnoise.constants import (
    COARSE_GRID_SIZE,
    DEFAULT_TRUNCATION,
    MAX_OPTIMIZER_EVALUATIONS,
    SIMPLEX_TOLERANCE,
)
from hurstnoise.errors import NumericalError, ParameterError
from hurstnoise.periodogram import Periodogram
from hurstnoise.spectral import SpectralModel, noise_psd

__all__ = ["ContrastSpec", "WhittleFit", "SimplexResult", "contrast", "minimize", "refine_simplex"]

logger = logging.getLogger(__name__)

BOUNDARY_EDGES = ("h_lo", "h_hi", "nu_lo", "nu_hi")


@dataclass(frozen=True)
class ContrastSpec:
    """Admissible rectangle [H-, H+] x [sigma-, sigma+] and the sampling setup (n, k, tau)."""

    h_lo: float
    h_hi: float
    sigma_lo: float
    sigma_hi: float
    k: int
    n: int
    tau: float = 0.0
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if not 0.0 < self.h_lo <= self.h_hi < 1.0:
            raise ParameterError(f"need 0 < h_lo <= h_hi < 1, got [{self.h_lo}, {self.h_hi}]")
        if not 0.0 < self.sigma_lo <= self.sigma_hi:
            raise ParameterError(
                f"need 0 < sigma_lo <= sigma_hi, got [{self.sigma_lo}, {self.sigma_hi}]"
            )
        if self.k < 1 or self.n < 2 or self.k > self.n:
            raise ParameterError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.tau < 0.0:
            raise ParameterError(f"tau must be nonnegative, got {self.tau}")

    @property
    def nu_bounds(self) -> tuple[float, float]:
        """[(k/n)^H+ sigma-, (k/n)^H- sigma+]."""
        ratio = self.k / self.n
        return ratio**self.h_hi * self.sigma_lo, ratio**self.h_lo * self.sigma_hi

    @property
    def noise_weight(self) -> float:
        return self.tau**2 / self.k

    def sigma_from_nu(self, h: float, nu: float) -> float:
        return nu * (self.n / self.k) ** h

    def nu_from_sigma(self, h: float, sigma: float) -> float:
        return sigma * (self.k / self.n) ** h


@dataclass(frozen=True)
class WhittleFit:
    """Minimiser (H, nu) of the contrast, sigma = nu (n/k)^H, and diagnostics."""

    h_hat: float
    nu_hat: float
    sigma_hat: float
    contrast: float
    evaluations: int
    converged: bool
    boundary_hit: dict[str, bool] = field(default_factory=dict)
    k: int = 1
    n: int = 0

    @property
    def on_boundary(self) -> bool:
        return any(self.boundary_hit.values())

    def to_dict(self) -> dict:
        return {
            "h": self.h_hat,
            "sigma": self.sigma_hat,
            "nu": self.nu_hat,
            "contrast": self.contrast,
            "k": self.k,
            "converged": self.converged,
            "evaluations": self.evaluations,
            "boundary_hit": dict(self.boundary_hit),
        }


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fun: float
    evaluations: int
    diameter: float


def _check_pairing(spec: ContrastSpec, pg: Periodogram) -> None:
    if pg.block_size != spec.k:
        raise ParameterError(
            f"periodogram was built with k={pg.block_size} but the contrast uses k={spec.k}"
        )


def _folded_mean(terms: np.ndarray, pg: Periodogram) -> np.ndarray:
    """(1/2N) * sum over the two-sided nonzero Fourier frequencies, folded."""
    total = 2.0 * terms.sum(axis=-1)
    if pg.has_nyquist:
        total = total - terms[..., -1]
    return total / (2.0 * pg.N)


def _contrast_values(
    f: np.ndarray, noise: np.ndarray, pg: Periodogram, nu: np.ndarray, noise_weight: float
) -> np.ndarray:
    nu = np.asarray(nu, dtype=np.float64)[..., None]
    g = nu**2 * f + noise_weight * noise
    if np.any(g <= 0.0) or not np.all(np.isfinite(g)):
        raise NumericalError(f"composite density not positive on the Fourier grid (min {np.min(g):.3e})")
    return _folded_mean(np.log(g) + pg.values / g, pg)


def contrast(spec: ContrastSpec, pg: Periodogram, h: float, nu: float) -> float:
    """Discrete Whittle contrast U(h, nu)."""
    _check_pairing(spec, pg)
    f = SpectralModel(h, spec.k, spec.truncation)(pg.freqs)
    return float(_contrast_values(f, noise_psd(pg.freqs), pg, nu, spec.noise_weight))


class _Objective:
    """Contrast in (H, log nu) with f_{H,k} cached per H."""

    def __init__(self, spec: ContrastSpec, pg: Periodogram):
        self.spec = spec
        self.pg = pg
        self.noise = noise_psd(pg.freqs)
        self.evaluations = 0
        self._cache: dict[float, np.ndarray] = {}

    def density(self, h: float) -> np.ndarray:
        h = float(h)
        f = self._cache.get(h)
        if f is None:
            f = SpectralModel(h, self.spec.k, self.spec.truncation)(self.pg.freqs)
            self._cache[h] = f
        return f

    def values(self, h: float, log_nu: np.ndarray) -> np.ndarray:
        log_nu = np.asarray(log_nu, dtype=np.float64)
        self.evaluations += log_nu.size
        return _contrast_values(
            self.density(h), self.noise, self.pg, np.exp(log_nu), self.spec.noise_weight
        )

    def __call__(self, h: float, log_nu: float) -> float:
        return float(self.values(h, log_nu))


def refine_simplex(
    objective: Callable[[np.ndarray], float],
    x0: np.ndarray,
    bounds: list[tuple[float, float]],
    steps: np.ndarray,
    max_evaluations: int = MAX_OPTIMIZER_EVALUATIONS,
) -> SimplexResult:
    """Bounded Nelder-Mead from x0 with an initial simplex of the given steps."""
    x0 = np.asarray(x0, dtype=np.float64)
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    simplex = [x0]
    for i, step in enumerate(steps):
        vertex = x0.copy()
        # step inwards when x0 sits on the upper edge
        vertex[i] = x0[i] + step if x0[i] + step <= hi[i] else x0[i] - step
        simplex.append(np.clip(vertex, lo, hi))
    res = optimize.minimize(
        objective,
        x0,
        method="Nelder-Mead",
        bounds=bounds,
        options={
            "initial_simplex": np.array(simplex),
            "xatol": 0.1 * SIMPLEX_TOLERANCE,
            "fatol": 1e-13,
            "maxfev": max_evaluations,
        },
    )
    vertices = res.final_simplex[0]
    diameter = float(max(np.max(np.abs(v - w)) for v in vertices for w in vertices))
    return SimplexResult(x=np.asarray(res.x), fun=float(res.fun), evaluations=int(res.nfev), diameter=diameter)


def _boundary_flags(spec: ContrastSpec, h: float, nu: float) -> dict[str, bool]:
    nu_lo, nu_hi = spec.nu_bounds
    # within the simplex tolerance of an edge counts as on it
    h_tol = SIMPLEX_TOLERANCE * max(spec.h_hi - spec.h_lo, 1.0)
    nu_tol = SIMPLEX_TOLERANCE
    return {
        "h_lo": spec.h_hi > spec.h_lo and h - spec.h_lo <= h_tol,
        "h_hi": spec.h_hi > spec.h_lo and spec.h_hi - h <= h_tol,
        "nu_lo": math.log(nu) - math.log(nu_lo) <= nu_tol,
        "nu_hi": math.log(nu_hi) - math.log(nu) <= nu_tol,
    }


def minimize(
    spec: ContrastSpec, pg: Periodogram, grid_size: int = COARSE_GRID_SIZE
) -> WhittleFit:
    """Minimise the contrast over the admissible rectangle.

    A coarse grid (linear in H, logarithmic in nu) is scanned first; ties
    go to the smaller H, then the smaller nu. Nelder-Mead in (H, log nu)
    then refines the best grid point. The refined point is kept only if it
    does not exceed the best grid value.
    """
    _check_pairing(spec, pg)
    objective = _Objective(spec, pg)
    nu_lo, nu_hi = spec.nu_bounds
    log_lo, log_hi = math.log(nu_lo), math.log(nu_hi)
    one_dim = spec.h_lo == spec.h_hi

    h_grid = np.array([spec.h_lo]) if one_dim else np.linspace(spec.h_lo, spec.h_hi, grid_size)
    log_nu_grid = np.linspace(log_lo, log_hi, grid_size) if log_hi > log_lo else np.array([log_lo])
    table = np.stack([objective.values(h, log_nu_grid) for h in h_grid])
    # argmin returns the first minimum: smallest H, then smallest nu
    i, j = np.unravel_index(np.argmin(table), table.shape)
    best_h, best_log_nu, best_value = float(h_grid[i]), float(log_nu_grid[j]), float(table[i, j])
    logger.debug("coarse grid minimum %.6g at H=%.4f, nu=%.4g", best_value, best_h, math.exp(best_log_nu))

    dh = (spec.h_hi - spec.h_lo) / max(grid_size - 1, 1)
    dlog = max((log_hi - log_lo) / max(grid_size - 1, 1), 1e-3)
    if one_dim:
        refined = refine_simplex(
            lambda x: objective(spec.h_lo, x[0]),
            np.array([best_log_nu]),
            [(log_lo, log_hi)],
            np.array([dlog]),
        )
        h_ref, log_nu_ref = spec.h_lo, float(refined.x[0])
    else:
        refined = refine_simplex(
            lambda x: objective(x[0], x[1]),
            np.array([best_h, best_log_nu]),
            [(spec.h_lo, spec.h_hi), (log_lo, log_hi)],
            np.array([dh, dlog]),
        )
        h_ref, log_nu_ref = float(refined.x[0]), float(refined.x[-1])

    if refined.fun <= best_value:
        h_hat, nu_hat, value = h_ref, math.exp(log_nu_ref), refined.fun
        converged = refined.diameter < SIMPLEX_TOLERANCE
    else:
        logger.debug("refinement (%.6g) worse than the grid (%.6g); keeping the grid point", refined.fun, best_value)
        h_hat, nu_hat, value = best_h, math.exp(best_log_nu), best_value
        converged = False

    h_hat = min(max(h_hat, spec.h_lo), spec.h_hi)
    nu_hat = min(max(nu_hat, nu_lo), nu_hi)
    boundary = _boundary_flags(spec, h_hat, nu_hat)
    if any(boundary.values()):
        logger.warning(
            "Whittle minimum on the boundary (%s) at H=%.4f, nu=%.4g",
            ", ".join(edge for edge in BOUNDARY_EDGES if boundary[edge]),
            h_hat,
            nu_hat,
        )
    if not converged:
        logger.debug("Nelder-Mead simplex diameter %.3g above tolerance", refined.diameter)

    return WhittleFit(
        h_hat=h_hat,
        nu_hat=nu_hat,
        sigma_hat=spec.sigma_from_nu(h_hat, nu_hat),
        contrast=value,
        evaluations=objective.evaluations,
        converged=converged,
        boundary_hit=boundary,
        k=spec.k,
        n=spec.n,
    )
