"""Seeded Monte Carlo studies of the estimators against their limit laws.

Replicate r draws its series from `replicate_seed(master, r)` only, and the
rows are collected in replicate order, so a study does not depend on the
number of worker processes.
"""

import dataclasses
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from hurstnoise.asymptotics import (
    fast_regime_report,
    gamma_star,
    rate_exponent,
    variance_optimal_regime,
)
from hurstnoise.errors import ParameterError, SampleTooSmallError
from hurstnoise.estimators import (
    PilotConfig,
    TwoStepConfig,
    min_pilot_intervals,
    optimal_estimate,
    pilot_estimate,
)
from hurstnoise.seeding import replicate_seed
from hurstnoise.spectral import INFINITY, SpectralModel
from hurstnoise.synthesis import ModelParams, simulate_observations

__all__ = [
    "REGIMES",
    "REPLICATE_COLUMNS",
    "McConfig",
    "ReplicateRow",
    "McSummary",
    "McReport",
    "run_replicate",
    "summarize",
    "run_study",
]

logger = logging.getLogger(__name__)

REGIMES = ("fast", "pilot", "optimal")

REPLICATE_COLUMNS = (
    "replicate",
    "seed",
    "h_pilot",
    "sigma_pilot",
    "k_pilot",
    "h_grid",
    "k_opt",
    "h_opt",
    "sigma_opt",
)


@dataclass(frozen=True)
class McConfig:
    """A Monte Carlo study: model, estimator, regime, replicate count and master seed.

    Regimes:
        fast: raw increments (k = 1), sqrt(n) scaling.
        pilot: pilot pre-averaging, sqrt(N) scaling.
        optimal: two-step estimator, n^(1/(4H0+2)) scaling.
    """

    params: ModelParams
    replicates: int
    seed: int
    regime: str = "optimal"
    pilot: PilotConfig = field(default_factory=PilotConfig)
    two_step: TwoStepConfig = field(default_factory=TwoStepConfig)

    def __post_init__(self):
        if self.replicates < 2:
            raise ParameterError(f"a study needs at least 2 replicates, got {self.replicates}")
        if self.regime not in REGIMES:
            raise ParameterError(f"unknown regime {self.regime!r}; expected one of {REGIMES}")
        if self.regime != "fast" and self.pilot.block_size is None:
            need = min_pilot_intervals(self.pilot.h_plus)
            if self.params.n < need:
                raise SampleTooSmallError(
                    f"regime {self.regime!r} at n={self.params.n} needs n >= {need} with "
                    f"H+={self.pilot.h_plus:g}; lower H+ or force the block size"
                )

    @property
    def pilot_config(self) -> PilotConfig:
        pilot = dataclasses.replace(self.pilot, tau=self.params.tau)
        if self.regime == "fast":
            pilot = dataclasses.replace(pilot, block_size=1)
        return pilot

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "replicates": self.replicates,
            "seed": self.seed,
            "regime": self.regime,
            "pilot": dataclasses.asdict(self.pilot),
            "two_step": dataclasses.asdict(self.two_step),
        }


@dataclass(frozen=True)
class ReplicateRow:
    replicate: int
    seed: int
    h_pilot: float
    sigma_pilot: float
    k_pilot: int
    h_grid: float | None = None
    k_opt: int | None = None
    h_opt: float | None = None
    sigma_opt: float | None = None

    @property
    def h_final(self) -> float:
        return self.h_pilot if self.h_opt is None else self.h_opt

    @property
    def sigma_final(self) -> float:
        return self.sigma_pilot if self.sigma_opt is None else self.sigma_opt

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, column) for column in REPLICATE_COLUMNS)


@dataclass(frozen=True)
class McSummary:
    """Rate-scaled errors of the final estimates against the theoretical limits."""

    mean_h: float
    sd_h: float
    mean_sigma: float
    sd_sigma: float
    theory_sd_h: float
    theory_sd_sigma: float
    coverage_h: float
    correlation: float
    median_abs_error_h: float
    median_abs_error_h_pilot: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class McReport:
    config: McConfig
    rows: list[ReplicateRow]
    summary: McSummary

    def to_dict(self) -> dict:
        return {"study": self.config.to_dict(), "summary": self.summary.to_dict()}


def run_replicate(cfg: McConfig, replicate: int) -> ReplicateRow:
    """Simulate and estimate replicate r of the study."""
    seed = replicate_seed(cfg.seed, replicate)
    z = simulate_observations(cfg.params, seed)
    pilot_cfg = cfg.pilot_config
    pilot = pilot_estimate(z, pilot_cfg)
    row = ReplicateRow(
        replicate=replicate,
        seed=seed,
        h_pilot=pilot.h_hat,
        sigma_pilot=pilot.sigma_hat,
        k_pilot=pilot.k,
    )
    if cfg.regime != "optimal":
        return row
    two_step = dataclasses.replace(cfg.two_step, h_bounds=pilot_cfg.h_bounds, seed=None)
    report = optimal_estimate(z, pilot, two_step, pilot_cfg)
    return dataclasses.replace(
        row,
        h_grid=report.h_grid,
        k_opt=report.k_opt,
        h_opt=report.optimal.h_hat,
        sigma_opt=report.optimal.sigma_hat,
    )


def _rates(cfg: McConfig, rows: list[ReplicateRow]) -> tuple[float, float]:
    """(rate for H, log factor dividing the rate for sigma)."""
    n = cfg.params.n
    if cfg.regime == "fast":
        return math.sqrt(n), math.log(n)
    if cfg.regime == "pilot":
        k = rows[0].k_pilot
        return math.sqrt((n + 1) // k - 1), math.log(n / k)
    return n ** rate_exponent(cfg.params.hurst), math.log(n)


def _theory(cfg: McConfig) -> tuple[float, float]:
    h0, sigma0, tau = cfg.params.hurst, cfg.params.sigma, cfg.params.tau
    if cfg.regime == "optimal":
        report = variance_optimal_regime(h0, sigma0, tau, gamma_star(cfg.two_step.delta_star, h0))
        return report.sd_h, report.sd_sigma
    block = 1 if cfg.regime == "fast" or cfg.pilot.block_size == 1 else INFINITY
    report = fast_regime_report(h0, sigma0, SpectralModel(h0, block))
    return report.sd_h, report.sd_sigma


def summarize(cfg: McConfig, rows: list[ReplicateRow]) -> McSummary:
    h0, sigma0 = cfg.params.hurst, cfg.params.sigma
    rate, log_factor = _rates(cfg, rows)
    h_err = np.array([row.h_final - h0 for row in rows])
    sigma_err = np.array([row.sigma_final - sigma0 for row in rows])
    pilot_err = np.array([row.h_pilot - h0 for row in rows])
    scaled_h = rate * h_err
    scaled_sigma = rate / log_factor * sigma_err
    theory_sd_h, theory_sd_sigma = _theory(cfg)
    if np.std(scaled_h) > 0.0 and np.std(scaled_sigma) > 0.0:
        correlation = float(np.corrcoef(scaled_h, scaled_sigma)[0, 1])
    else:
        correlation = math.nan
    return McSummary(
        mean_h=float(np.mean(scaled_h)),
        sd_h=float(np.std(scaled_h, ddof=1)),
        mean_sigma=float(np.mean(scaled_sigma)),
        sd_sigma=float(np.std(scaled_sigma, ddof=1)),
        theory_sd_h=theory_sd_h,
        theory_sd_sigma=theory_sd_sigma,
        coverage_h=float(np.mean(np.abs(scaled_h) <= 1.96 * theory_sd_h)),
        correlation=correlation,
        median_abs_error_h=float(np.median(np.abs(h_err))),
        median_abs_error_h_pilot=float(np.median(np.abs(pilot_err))),
    )


def run_study(cfg: McConfig, workers: int | None = 1) -> McReport:
    """Run all replicates (in a process pool when workers != 1) and summarise.

    Args:
        cfg: Study configuration.
        workers: Worker processes; 1 runs in-process, None uses os.cpu_count().
    """
    logger.info(
        "Monte Carlo study: regime=%s, n=%d, H0=%g, %d replicates, seed=%d",
        cfg.regime,
        cfg.params.n,
        cfg.params.hurst,
        cfg.replicates,
        cfg.seed,
    )
    indices = range(cfg.replicates)
    if workers == 1:
        rows = [run_replicate(cfg, r) for r in indices]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_replicate, [cfg] * cfg.replicates, indices, chunksize=4))
    summary = summarize(cfg, rows)
    logger.info(
        "rate-scaled H error: sd %.4g (theory %.4g), coverage %.3f",
        summary.sd_h,
        summary.theory_sd_h,
        summary.coverage_h,
    )
    return McReport(config=cfg, rows=rows, summary=summary)
