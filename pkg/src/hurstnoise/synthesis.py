"""Exact simulation of noisy fBm observations and their increment series.

The observation model on the unit grid is

    Z_i = sigma * W^H_{i/n} + tau * xi_i,    i = 0..n,

with W^H a standard fractional Brownian motion and xi_i i.i.d. N(0, 1).
Fractional Gaussian noise is drawn by circulant embedding (Davies-Harte),
the path and the noise come from independent sub-streams of one seed.
"""

import functools
import logging
from dataclasses import dataclass, field

import numpy as np

from hurstnoise.constants import EMBEDDING_TOLERANCE, MAX_EMBEDDING_DOUBLINGS
from hurstnoise.errors import NumericalError, ParameterError
from hurstnoise.seeding import substream

__all__ = [
    "ModelParams",
    "ObservationSeries",
    "IncrementSeries",
    "fgn_autocovariance",
    "simulate_fgn",
    "simulate_observations",
    "preaverage",
]

logger = logging.getLogger(__name__)

SeedLike = int | np.random.Generator


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ModelParams:
    """Parameters (H, sigma, tau, n) of the observation model."""

    hurst: float
    sigma: float
    tau: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ParameterError(f"hurst must lie in (0, 1), got {self.hurst}")
        if not self.sigma > 0.0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not self.tau >= 0.0:
            raise ParameterError(f"tau must be nonnegative, got {self.tau}")
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n}")

    def to_dict(self) -> dict:
        return {"n": int(self.n), "hurst": self.hurst, "sigma": self.sigma, "tau": self.tau}


@dataclass(frozen=True, eq=False)
class ObservationSeries:
    """Noisy samples Z_0..Z_n, with the true parameters when simulated."""

    values: np.ndarray
    params: ModelParams | None = None
    seed: int | None = None

    def __post_init__(self):
        values = _readonly(self.values)
        if values.ndim != 1 or len(values) < 2:
            raise ParameterError(f"an observation series needs >= 2 values, got shape {values.shape}")
        if self.params is not None and len(values) != self.params.n + 1:
            raise ParameterError(
                f"series has {len(values)} values but params.n + 1 = {self.params.n + 1}"
            )
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        """Number of sampling intervals."""
        return len(self.values) - 1

    def increments(self) -> "IncrementSeries":
        """Raw increments Z_i - Z_{i-1}."""
        return preaverage(self, 1)


@dataclass(frozen=True, eq=False)
class IncrementSeries:
    """Increments of k-block means of an observation series.

    `n_source` is the number of observations the blocks were cut from, so the
    series holds floor(n_source / block_size) - 1 values.
    """

    values: np.ndarray
    block_size: int = 1
    n_source: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        if self.block_size < 1:
            raise ParameterError(f"block_size must be >= 1, got {self.block_size}")
        if self.n_source == 0:
            object.__setattr__(self, "n_source", (len(self.values) + 1) * self.block_size)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def N(self) -> int:  # noqa: N802
        return len(self.values)


def fgn_autocovariance(hurst: float, lags, n: int = 1) -> np.ndarray:
    """Autocovariance of fGn with spacing 1/n at integer lags.

    gamma(tau) = n^(-2H) * (|tau+1|^(2H) + |tau-1|^(2H) - 2|tau|^(2H)) / 2
    """
    tau = np.abs(np.asarray(lags, dtype=np.float64))
    two_h = 2.0 * hurst
    gamma = 0.5 * (np.abs(tau + 1.0) ** two_h + np.abs(tau - 1.0) ** two_h - 2.0 * tau**two_h)
    return float(n) ** (-two_h) * gamma


@functools.lru_cache(maxsize=64)
def _sqrt_eigenvalues(hurst: float, size: int) -> np.ndarray:
    """Square roots of the circulant eigenvalues (rfft layout) for at least `size` increments.

    The embedding of length 2m is doubled while an eigenvalue is below
    -EMBEDDING_TOLERANCE; remaining small negative values are clipped.
    """
    m = size
    for attempt in range(MAX_EMBEDDING_DOUBLINGS + 1):
        gamma = fgn_autocovariance(hurst, np.arange(m + 1))
        row = np.concatenate([gamma, gamma[-2:0:-1]])
        eigenvalues = np.fft.rfft(row).real
        smallest = float(eigenvalues.min())
        if smallest >= -EMBEDDING_TOLERANCE:
            root = np.sqrt(np.maximum(eigenvalues, 0.0))
            root.setflags(write=False)
            return root
        logger.debug(
            "circulant embedding of size %d has eigenvalue %.3e (attempt %d), doubling",
            2 * m,
            smallest,
            attempt,
        )
        m *= 2
    raise NumericalError(
        f"circulant embedding not nonnegative definite for H={hurst}, n={size}: "
        f"min eigenvalue {smallest:.3e} after {MAX_EMBEDDING_DOUBLINGS} doublings"
    )


def _generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return substream(seed, "path")


def simulate_fgn(
    hurst: float, n: int, seed: SeedLike, replicates: int | None = None
) -> np.ndarray:
    """Fractional Gaussian noise G_i = W^H_{i/n} - W^H_{(i-1)/n}, i = 1..n.

    Args:
        hurst: Hurst index in (0, 1).
        n: Number of increments (grid spacing 1/n).
        seed: Master seed (its "path" sub-stream is used) or a Generator.
        replicates: Number of independent draws; None returns a single vector.

    Returns:
        Array of shape (n,) or (replicates, n).
    """
    if not 0.0 < hurst < 1.0:
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rng = _generator(seed)
    count = 1 if replicates is None else int(replicates)

    root = _sqrt_eigenvalues(float(hurst), int(n))
    half = len(root) - 1
    size = 2 * half

    z = np.empty((count, half + 1), dtype=np.complex128)
    z[:, 0] = rng.standard_normal(count)
    z[:, half] = rng.standard_normal(count)
    z[:, 1:half] = (
        rng.standard_normal((count, half - 1)) + 1j * rng.standard_normal((count, half - 1))
    ) / np.sqrt(2.0)
    z *= root * np.sqrt(size)
    noise = np.fft.irfft(z, n=size, axis=1)[:, :n] * float(n) ** (-hurst)
    return noise[0] if replicates is None else noise


def simulate_observations(params: ModelParams, seed: int) -> ObservationSeries:
    """Draw Z_0..Z_n of the observation model; deterministic in (params, seed)."""
    increments = simulate_fgn(params.hurst, params.n, substream(seed, "path"))
    path = np.concatenate([[0.0], np.cumsum(increments)])
    values = params.sigma * path
    if params.tau > 0.0:
        values = values + params.tau * substream(seed, "noise").standard_normal(params.n + 1)
    logger.debug("simulated n=%d observations with seed %d", params.n, seed)
    return ObservationSeries(values=values, params=params, seed=int(seed))


def preaverage(series: ObservationSeries, k: int) -> IncrementSeries:
    """Increments of the means of consecutive blocks of k observations.

    With N = floor(len(values) / k) full blocks, the block means
    Zbar_i = mean(Z_{ik}, ..., Z_{ik+k-1}) give Y_i = Zbar_i - Zbar_{i-1}.
    A trailing partial block is discarded.
    """
    values = series.values
    if int(k) != k or not 1 <= k <= len(values) // 2:
        raise ParameterError(f"block size must be an integer in [1, {len(values) // 2}], got {k}")
    k = int(k)
    blocks = len(values) // k
    if k == 1:
        y = np.diff(values)
    else:
        means = values[: blocks * k].reshape(blocks, k).mean(axis=1)
        y = np.diff(means)
    return IncrementSeries(values=y, block_size=k, n_source=len(values))
