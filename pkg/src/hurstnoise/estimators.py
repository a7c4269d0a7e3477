"""Pilot pre-averaged Whittle estimator and the two-step rate-optimal estimator.

The pilot pre-averages with the conservative block size
k(n) = ceil(n^(2H+/(2H+ + 1))) and minimises the Whittle contrast. The
two-step estimator rounds the pilot up onto a grid of mesh (H+ - H-)/m with a
random offset U, uses it to choose k_opt = floor(n^(2h/(2h+1))) and minimises
the contrast again over [H-, h] x nu-range.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field

from hurstnoise.asymptotics import (
    fast_regime_report,
    gamma_star,
    rate_exponent,
    variance_optimal_regime,
)
from hurstnoise.constants import (
    COARSE_GRID_SIZE,
    DEFAULT_DELTA_STAR,
    DEFAULT_H_BOUNDS,
    DEFAULT_SIGMA_BOUNDS,
    DEFAULT_TRUNCATION,
    MIN_INCREMENTS,
)
from hurstnoise.errors import ParameterError, SampleTooSmallError
from hurstnoise.periodogram import periodogram
from hurstnoise.seeding import draw_seed, substream
from hurstnoise.spectral import INFINITY, SpectralModel
from hurstnoise.synthesis import ObservationSeries, preaverage
from hurstnoise.whittle import ContrastSpec, WhittleFit, minimize

__all__ = [
    "PilotConfig",
    "TwoStepConfig",
    "EstimateReport",
    "pilot_block_size",
    "min_pilot_intervals",
    "default_grid_resolution",
    "optimal_block_size",
    "pilot_estimate",
    "grid_round",
    "optimal_estimate",
    "pilot_report",
    "estimate",
]

logger = logging.getLogger(__name__)


def pilot_block_size(n: int, h_plus: float) -> int:
    """ceil(n^(2H+/(2H+ + 1)))."""
    return math.ceil(n ** (2.0 * h_plus / (2.0 * h_plus + 1.0)))


def min_pilot_intervals(h_plus: float) -> int:
    """Smallest n whose pilot block ceil(n^(2H+/(2H+ + 1))) leaves MIN_INCREMENTS increments.

    Roughly (MIN_INCREMENTS + 1)^(2H+ + 1): about 10^4 for H+ = 0.6, about 1.8e5
    (between 2^17 and 2^18) for the default H+ = 0.95.
    """

    def enough(n: int) -> bool:
        return _increment_count(n + 1, pilot_block_size(n, h_plus)) >= MIN_INCREMENTS

    hi = MIN_INCREMENTS
    while not enough(hi):
        hi *= 2
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if enough(mid):
            hi = mid
        else:
            lo = mid
    return hi


def default_grid_resolution(n: int, h_plus: float) -> int:
    """ceil(n^(1/(4H+ + 2)) / log n), at least 1."""
    return max(1, math.ceil(n ** rate_exponent(h_plus) / math.log(n)))


def optimal_block_size(n: int, h_grid: float) -> int:
    """floor(n^(2h/(2h+1)))."""
    return math.floor(n ** (2.0 * h_grid / (2.0 * h_grid + 1.0)))


def _check_bounds(name: str, bounds: tuple[float, float], upper: float | None) -> None:
    lo, hi = bounds
    if not (0.0 < lo <= hi and (upper is None or hi < upper)):
        raise ParameterError(f"invalid {name} bounds [{lo}, {hi}]")


@dataclass(frozen=True)
class PilotConfig:
    """Admissible rectangle and block schedule of the pilot estimator.

    Attributes:
        h_bounds: [H-, H+]; H+ also drives the block schedule.
        sigma_bounds: [sigma-, sigma+].
        tau: Known noise level.
        block_size: Forced block size; None uses ceil(n^(2H+/(2H+ + 1))).
    """

    h_bounds: tuple[float, float] = DEFAULT_H_BOUNDS
    sigma_bounds: tuple[float, float] = DEFAULT_SIGMA_BOUNDS
    tau: float = 0.0
    block_size: int | None = None
    truncation: int = DEFAULT_TRUNCATION
    grid_size: int = COARSE_GRID_SIZE

    def __post_init__(self):
        _check_bounds("H", self.h_bounds, 1.0)
        _check_bounds("sigma", self.sigma_bounds, None)
        if self.tau < 0.0:
            raise ParameterError(f"tau must be nonnegative, got {self.tau}")
        if self.block_size is not None and self.block_size < 1:
            raise ParameterError(f"forced block size must be >= 1, got {self.block_size}")

    @property
    def h_plus(self) -> float:
        return self.h_bounds[1]

    def block_size_for(self, n: int) -> int:
        return self.block_size if self.block_size is not None else pilot_block_size(n, self.h_plus)

    def contrast_spec(self, n: int, k: int, h_hi: float | None = None) -> ContrastSpec:
        return ContrastSpec(
            h_lo=self.h_bounds[0],
            h_hi=self.h_bounds[1] if h_hi is None else h_hi,
            sigma_lo=self.sigma_bounds[0],
            sigma_hi=self.sigma_bounds[1],
            k=k,
            n=n,
            tau=self.tau,
            truncation=self.truncation,
        )


@dataclass(frozen=True)
class TwoStepConfig:
    """Grid rounding of the pilot and the seed of the auxiliary uniform U.

    m and q are filled in for a given n by `resolved`: q = delta*/log n and,
    unless given, m = ceil(n^(1/(4H+ + 2)) / log n).
    """

    delta_star: float = DEFAULT_DELTA_STAR
    m: int | None = None
    q: float | None = None
    h_bounds: tuple[float, float] = DEFAULT_H_BOUNDS
    seed: int | None = None

    def __post_init__(self):
        if self.delta_star <= 0.0:
            raise ParameterError(f"delta_star must be positive, got {self.delta_star}")
        if self.m is not None and self.m < 1:
            raise ParameterError(f"grid resolution m must be >= 1, got {self.m}")
        if self.q is not None and self.q < 0.0:
            raise ParameterError(f"grid offset q must be nonnegative, got {self.q}")
        _check_bounds("H", self.h_bounds, 1.0)

    def resolved(self, n: int) -> "TwoStepConfig":
        h_plus = self.h_bounds[1]
        m = self.m if self.m is not None else default_grid_resolution(n, h_plus)
        log_n = math.log(n)
        if m <= log_n or m >= n ** rate_exponent(h_plus):
            logger.warning(
                "grid resolution m=%d outside (log n, n^(1/(4H+ + 2))) = (%.2f, %.2f) at n=%d",
                m,
                log_n,
                n ** rate_exponent(h_plus),
                n,
            )
        q = self.q if self.q is not None else self.delta_star / log_n
        return dataclasses.replace(self, m=m, q=q)


@dataclass(frozen=True)
class EstimateReport:
    """Pilot fit, grid point, optimal fit and asymptotic standard deviations.

    Pilot-only reports leave h_grid, k_opt and optimal unset and carry the
    pilot's asymptotic standard deviations.
    """

    pilot: WhittleFit
    h_grid: float | None = None
    k_opt: int | None = None
    optimal: WhittleFit | None = None
    asymptotic_sd_h: float = math.nan
    asymptotic_sd_sigma: float = math.nan
    u: float | None = None
    seeds: dict = field(default_factory=dict)

    @property
    def pilot_only(self) -> bool:
        return self.optimal is None

    @property
    def final(self) -> WhittleFit:
        return self.pilot if self.optimal is None else self.optimal

    def to_dict(self) -> dict:
        out: dict = {"pilot": self.pilot.to_dict()}
        if self.optimal is not None:
            out["h_grid"] = self.h_grid
            out["k_opt"] = self.k_opt
            out["optimal"] = self.optimal.to_dict()
        out["asymptotic_sd"] = {"h": self.asymptotic_sd_h, "sigma": self.asymptotic_sd_sigma}
        out["seeds"] = dict(self.seeds)
        return out


def _increment_count(length: int, k: int) -> int:
    return length // k - 1


def _fit(z: ObservationSeries, spec: ContrastSpec, grid_size: int) -> WhittleFit:
    count = _increment_count(len(z.values), spec.k)
    if count < MIN_INCREMENTS:
        raise SampleTooSmallError(
            f"block size k={spec.k} leaves {count} increments, need at least {MIN_INCREMENTS}"
        )
    y = preaverage(z, spec.k)
    return minimize(spec, periodogram(y), grid_size)


def pilot_estimate(z: ObservationSeries, cfg: PilotConfig | None = None) -> WhittleFit:
    """Whittle fit of the increments pre-averaged with the pilot block size.

    Raises:
        SampleTooSmallError: if fewer than 64 pre-averaged increments remain, in particular
            when n < min_pilot_intervals(H+) under the default schedule.
    """
    cfg = cfg or PilotConfig()
    n = z.n
    if cfg.block_size is None and n < min_pilot_intervals(cfg.h_plus):
        raise SampleTooSmallError(
            f"n={n} is too short for the pilot block schedule with H+={cfg.h_plus:g}: "
            f"it needs n >= {min_pilot_intervals(cfg.h_plus)}; lower H+ or supply a longer series"
        )
    k = cfg.block_size_for(n)
    fit = _fit(z, cfg.contrast_spec(n, k), cfg.grid_size)
    logger.info(
        "pilot fit: k=%d, H=%.4f, sigma=%.4g (contrast %.6g)", k, fit.h_hat, fit.sigma_hat, fit.contrast
    )
    return fit


def grid_round(h_pilot: float, cfg: TwoStepConfig, u: float) -> float:
    """Round the pilot up onto the grid H- + i (H+ - H-)/m.

    i = ceil(m (h_pilot - H- + q) / (H+ - H-) + u); the result is clamped to
    [H-, H+]. `cfg` must carry m and q (see `TwoStepConfig.resolved`).
    """
    if cfg.m is None or cfg.q is None:
        raise ParameterError("grid_round needs a resolved TwoStepConfig (m and q set)")
    if not 0.0 <= u < 1.0:
        raise ParameterError(f"u must lie in [0, 1), got {u}")
    h_lo, h_hi = cfg.h_bounds
    width = h_hi - h_lo
    if width <= 0.0:
        return h_lo
    index = math.ceil(cfg.m * (h_pilot - h_lo + cfg.q) / width + u)
    h_grid = h_lo + index / cfg.m * width
    if h_grid > h_hi or h_grid < h_lo:
        logger.warning("grid point %.4f outside [%.4f, %.4f]; clamped", h_grid, h_lo, h_hi)
        h_grid = min(max(h_grid, h_lo), h_hi)
    return h_grid


def _grid_seed(z: ObservationSeries, cfg: TwoStepConfig) -> int:
    if cfg.seed is not None:
        return int(cfg.seed)
    if z.seed is not None:
        return int(z.seed)
    seed = draw_seed()
    logger.info("no seed for the grid offset U; drew %d", seed)
    return seed


def optimal_estimate(
    z: ObservationSeries,
    pilot: WhittleFit,
    cfg: TwoStepConfig | None = None,
    pilot_cfg: PilotConfig | None = None,
) -> EstimateReport:
    """Second step: re-pre-average with k_opt and minimise over [H-, h_grid].

    The auxiliary uniform U comes from the "grid" sub-stream of cfg.seed (or
    of the series' seed). Sigma bounds and tau are taken from `pilot_cfg`.

    Raises:
        SampleTooSmallError: if k_opt < 2 or fewer than 64 increments remain.
    """
    pilot_cfg = pilot_cfg or PilotConfig()
    cfg = (cfg or TwoStepConfig(h_bounds=pilot_cfg.h_bounds)).resolved(z.n)
    n = z.n
    seed = _grid_seed(z, cfg)
    u = float(substream(seed, "grid").random())
    h_grid = grid_round(pilot.h_hat, cfg, u)
    k_opt = optimal_block_size(n, h_grid)
    if k_opt < 2:
        raise SampleTooSmallError(f"k_opt = floor(n^(2h/(2h+1))) = {k_opt} < 2 at n={n}, h={h_grid:.4f}")
    logger.info("grid point h=%.4f (m=%d, q=%.4f, U=%.4f), k_opt=%d", h_grid, cfg.m, cfg.q, u, k_opt)

    spec = pilot_cfg.contrast_spec(n, k_opt, h_hi=h_grid)
    fit = _fit(z, spec, pilot_cfg.grid_size)
    if fit.boundary_hit.get("h_hi"):
        logger.warning("optimal fit at the grid point H = %.4f", h_grid)

    g_star = gamma_star(cfg.delta_star, fit.h_hat)
    report = variance_optimal_regime(fit.h_hat, fit.sigma_hat, pilot_cfg.tau, g_star)
    sd_h = report.sd_h * n ** (-rate_exponent(fit.h_hat))
    sd_sigma = sd_h * fit.sigma_hat * math.log(n) / (2.0 * fit.h_hat + 1.0)
    logger.info("optimal fit: H=%.4f, sigma=%.4g (sd %.3g, %.3g)", fit.h_hat, fit.sigma_hat, sd_h, sd_sigma)
    return EstimateReport(
        pilot=pilot,
        h_grid=h_grid,
        k_opt=k_opt,
        optimal=fit,
        asymptotic_sd_h=sd_h,
        asymptotic_sd_sigma=sd_sigma,
        u=u,
        seeds={"master": z.seed, "grid": seed},
    )


def pilot_report(z: ObservationSeries, pilot: WhittleFit) -> EstimateReport:
    """Pilot-only report with sqrt(N) standard deviations.

    The limit density is f_{H,1} for raw increments and f_{H,inf} otherwise.
    """
    k = pilot.k
    density = SpectralModel(pilot.h_hat, 1 if k == 1 else INFINITY)
    report = fast_regime_report(pilot.h_hat, pilot.sigma_hat, density)
    count = _increment_count(len(z.values), k)
    sd_h = report.sd_h / math.sqrt(count)
    sd_sigma = pilot.sigma_hat * math.log(z.n / k) * sd_h
    return EstimateReport(
        pilot=pilot,
        asymptotic_sd_h=sd_h,
        asymptotic_sd_sigma=sd_sigma,
        seeds={"master": z.seed},
    )


def estimate(
    z: ObservationSeries,
    pilot_cfg: PilotConfig | None = None,
    two_step_cfg: TwoStepConfig | None = None,
    pilot_only: bool = False,
) -> EstimateReport:
    """Pilot fit followed (unless pilot_only) by the two-step estimator."""
    pilot_cfg = pilot_cfg or PilotConfig()
    pilot = pilot_estimate(z, pilot_cfg)
    if pilot_only:
        return pilot_report(z, pilot)
    two_step_cfg = two_step_cfg or TwoStepConfig()
    two_step_cfg = dataclasses.replace(two_step_cfg, h_bounds=pilot_cfg.h_bounds)
    return optimal_estimate(z, pilot, two_step_cfg, pilot_cfg)
