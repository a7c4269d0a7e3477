"""Spectral densities of (pre-averaged) fBm increments and of the noisy composite.

For block size k the increments of k-block means of a standard fBm sampled
at unit spacing have spectral density

    f_{H,k}(lam) = A(H) sum_j (1 - cos lam)^2 / (k^2 sin^2(lam/2k + pi j/k))
                          * |lam + 2 pi j|^(-1-2H),

with A(H) = Gamma(2H + 1) sin(pi H), and as k -> infinity

    f_{H,inf}(lam) = 4 A(H) (1 - cos lam)^2 sum_j |lam + 2 pi j|^(-3-2H).

The j-series are evaluated by grouping j by its residue modulo k: every class
is a two-sided lattice sum with period 2 pi k whose tail is exact (Hurwitz
zeta and Euler-Maclaurin), see `hurstnoise._core.series`. H-derivatives are
taken term-wise.
"""

import dataclasses
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import special

from hurstnoise._core.series import lattice_log_sums
from hurstnoise.constants import DEFAULT_TRUNCATION, FREQUENCY_FLOOR, MIN_DIRECT_TERMS
from hurstnoise.errors import DomainError, NumericalError, ParameterError

__all__ = [
    "INFINITY",
    "SpectralModel",
    "CompositeDensity",
    "noise_psd",
    "psd_preaveraged",
    "psd_limit",
    "dpsd_dH",
    "composite_psd",
    "psd_table",
]

logger = logging.getLogger(__name__)

INFINITY = math.inf
"""Block size of the limit density f_{H,inf}."""

# residue classes times frequencies handled per chunk
_CHUNK = 1 << 18
# frequencies per chunk of the plain truncated sum
_TRUNCATED_CHUNK = 256


def noise_psd(lam) -> np.ndarray:
    """Spectral density l(lam) = 2 (1 - cos lam) of differenced white noise."""
    lam = np.asarray(lam, dtype=np.float64)
    return 4.0 * np.sin(0.5 * lam) ** 2


def _amplitude(hurst: float, max_order: int) -> np.ndarray:
    """Gamma(2H+1) sin(pi H) and its first two H-derivatives."""
    a = special.gamma(2.0 * hurst + 1.0) * math.sin(math.pi * hurst)
    d1 = 2.0 * special.digamma(2.0 * hurst + 1.0) + math.pi / math.tan(math.pi * hurst)
    d2 = 4.0 * special.polygamma(1, 2.0 * hurst + 1.0) - (math.pi / math.sin(math.pi * hurst)) ** 2
    return np.array([a, a * d1, a * (d1 * d1 + d2)])[: max_order + 1]


def _frequencies(lam) -> tuple[np.ndarray, np.ndarray]:
    """|lam| clamped to [FREQUENCY_FLOOR, pi], with the input shape."""
    lam = np.asarray(lam, dtype=np.float64)
    mag = np.abs(lam)
    if np.any(mag == 0.0):
        raise DomainError("spectral densities are not evaluated at lambda = 0")
    if np.any(mag > math.pi * (1.0 + 1e-12)) or not np.all(np.isfinite(mag)):
        raise DomainError(f"frequencies must lie in [-pi, pi], got max |lambda| = {mag.max()}")
    return np.clip(mag, FREQUENCY_FLOOR, math.pi), lam


def _log_series(
    hurst: float, k: float, lam: np.ndarray, max_power: int, truncation: int
) -> np.ndarray:
    """Weighted lattice sums S_p = sum_j c_j(lam) |lam + 2 pi j|^(-s) log|lam + 2 pi j|^p."""
    half_cos_sq = 2.0 * np.sin(0.5 * lam) ** 2  # 1 - cos lam
    if math.isinf(k):
        sums = lattice_log_sums(3.0 + 2.0 * hurst, lam, 2.0 * math.pi, max_power, truncation)
        return 4.0 * half_cos_sq**2 * sums

    k = int(k)
    s = 1.0 + 2.0 * hurst
    direct = max(MIN_DIRECT_TERMS, math.ceil(truncation / k))
    residues = np.arange(k, dtype=np.float64)
    out = np.empty((max_power + 1, len(lam)))
    step = max(1, _CHUNK // k)
    for start in range(0, len(lam), step):
        part = lam[start : start + step, None]
        offsets = part + 2.0 * math.pi * residues[None, :]
        weights = half_cos_sq[start : start + step, None] ** 2 / (
            k * k * np.sin(offsets / (2.0 * k)) ** 2
        )
        sums = lattice_log_sums(s, offsets, 2.0 * math.pi * k, max_power, direct)
        out[:, start : start + step] = (weights[None] * sums).sum(axis=-1)
    return out


def _truncated_series(
    hurst: float, k: float, lam: np.ndarray, max_power: int, truncation: int
) -> np.ndarray:
    """Plain symmetric sum over |j| <= J, without tail."""
    half_cos_sq = 2.0 * np.sin(0.5 * lam) ** 2
    j = np.arange(-truncation, truncation + 1, dtype=np.float64)
    s = 3.0 + 2.0 * hurst if math.isinf(k) else 1.0 + 2.0 * hurst
    out = np.empty((max_power + 1, len(lam)))
    for start in range(0, len(lam), _TRUNCATED_CHUNK):
        part = lam[start : start + _TRUNCATED_CHUNK, None]
        x = np.abs(part + 2.0 * math.pi * j[None, :])
        base = x ** (-s)
        if math.isinf(k):
            base = base * 4.0 * half_cos_sq[start : start + _TRUNCATED_CHUNK, None] ** 2
        else:
            base = base * half_cos_sq[start : start + _TRUNCATED_CHUNK, None] ** 2 / (
                k * k * np.sin((part + 2.0 * math.pi * j[None, :]) / (2.0 * k)) ** 2
            )
        log_x = np.log(x)
        for p in range(max_power + 1):
            out[p, start : start + _TRUNCATED_CHUNK] = base.sum(axis=-1)
            base = base * log_x
    return out


@dataclass(frozen=True)
class SpectralModel:
    """Evaluator of f_{H,k} (or f_{H,inf}) and its H-derivatives.

    Attributes:
        hurst: Hurst index in (0, 1).
        block_size: Pre-averaging block size k >= 1, or INFINITY.
        truncation: Lattice terms summed directly on each side of j = 0.
        tail_correction: Add the exact tail of the series; without it the
            plain truncated sum over |j| <= truncation is returned.
    """

    hurst: float
    block_size: float = 1
    truncation: int = DEFAULT_TRUNCATION
    tail_correction: bool = True

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ParameterError(f"hurst must lie in (0, 1), got {self.hurst}")
        if not math.isinf(self.block_size) and (
            int(self.block_size) != self.block_size or self.block_size < 1
        ):
            raise ParameterError(f"block_size must be an integer >= 1 or INFINITY, got {self.block_size}")
        if self.truncation < 1:
            raise ParameterError(f"truncation must be >= 1, got {self.truncation}")

    @property
    def is_limit(self) -> bool:
        return math.isinf(self.block_size)

    def with_hurst(self, hurst: float) -> "SpectralModel":
        return dataclasses.replace(self, hurst=hurst)

    def derivatives(self, lam, max_order: int = 0) -> np.ndarray:
        """f and its H-derivatives up to max_order, shape (max_order + 1, *lam.shape)."""
        if max_order not in (0, 1, 2):
            raise ParameterError(f"derivative order must be 0, 1 or 2, got {max_order}")
        mag, lam = _frequencies(lam)
        flat = mag.ravel()
        series = _log_series if self.tail_correction else _truncated_series
        sums = series(self.hurst, self.block_size, flat, max_order, self.truncation)
        amp = _amplitude(self.hurst, max_order)

        # d^p/dH^p of the series is (-2)^p S_p
        s0 = sums[0]
        out = [amp[0] * s0]
        if max_order >= 1:
            s1 = -2.0 * sums[1]
            out.append(amp[1] * s0 + amp[0] * s1)
        if max_order >= 2:
            s2 = 4.0 * sums[2]
            out.append(amp[2] * s0 + 2.0 * amp[1] * s1 + amp[0] * s2)
        return np.stack(out).reshape((max_order + 1, *lam.shape))

    def evaluate(self, lam, order: int = 0) -> np.ndarray:
        """f (order 0), d f / dH (order 1) or d^2 f / dH^2 (order 2) at lam."""
        return self.derivatives(lam, order)[order]

    def __call__(self, lam) -> np.ndarray:
        return self.evaluate(lam, 0)


@dataclass(frozen=True)
class CompositeDensity:
    """g(lam) = nu^2 f_{H,k}(lam) + (tau^2 / k) l(lam) of pre-averaged noisy increments.

    `noise_density` replaces l(lam) = 2(1 - cos lam) by any even density.
    """

    spectral: SpectralModel
    nu: float
    tau: float = 0.0
    noise_density: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.nu < 0.0:
            raise ParameterError(f"nu must be nonnegative, got {self.nu}")
        if self.tau < 0.0:
            raise ParameterError(f"tau must be nonnegative, got {self.tau}")

    @property
    def k(self) -> float:
        return self.spectral.block_size

    @property
    def noise_weight(self) -> float:
        return self.tau**2 / self.k

    def noise(self, lam) -> np.ndarray:
        density = self.noise_density if self.noise_density is not None else noise_psd
        return np.asarray(density(lam), dtype=np.float64)

    def with_params(self, hurst: float, nu: float) -> "CompositeDensity":
        return dataclasses.replace(self, spectral=self.spectral.with_hurst(hurst), nu=nu)

    def __call__(self, lam) -> np.ndarray:
        _frequencies(lam)
        signal = self.nu**2 * self.spectral(lam) if self.nu > 0.0 else 0.0
        return signal + self.noise_weight * self.noise(lam)


def psd_preaveraged(
    hurst: float,
    k: int,
    lam,
    J: int = DEFAULT_TRUNCATION,  # noqa: N803
    tail_correction: bool = True,
) -> np.ndarray:
    """f_{H,k}(lam) for 0 < |lam| <= pi."""
    return SpectralModel(hurst, k, J, tail_correction)(lam)


def psd_limit(
    hurst: float,
    lam,
    J: int = DEFAULT_TRUNCATION,  # noqa: N803
    tail_correction: bool = True,
) -> np.ndarray:
    """f_{H,inf}(lam) for 0 < |lam| <= pi."""
    return SpectralModel(hurst, INFINITY, J, tail_correction)(lam)


def dpsd_dH(  # noqa: N802
    hurst: float,
    k: float,
    lam,
    order: int = 1,
    J: int = DEFAULT_TRUNCATION,  # noqa: N803
) -> np.ndarray:
    """First or second H-derivative of f_{H,k} (k may be INFINITY)."""
    if order not in (1, 2):
        raise ParameterError(f"order must be 1 or 2, got {order}")
    return SpectralModel(hurst, k, J).evaluate(lam, order)


def composite_psd(cd: CompositeDensity, lam) -> np.ndarray:
    """nu^2 f_{H,k}(lam) + (tau^2 / k) l(lam)."""
    g = cd(lam)
    if np.any(g <= 0.0):
        raise NumericalError(f"composite density is not positive (min {np.min(g):.3e})")
    return g


def psd_table(
    hurst: float,
    k: float,
    lam=None,
    points: int = 256,
    J: int = DEFAULT_TRUNCATION,  # noqa: N803
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(lam, f, df/dH) on a grid; defaults to lam_j = pi j / points, j = 1..points."""
    if lam is None:
        lam = math.pi * np.arange(1, points + 1) / points
    lam = np.asarray(lam, dtype=np.float64)
    values = SpectralModel(hurst, k, J).derivatives(lam, 1)
    logger.debug("tabulated f_{H=%g,k=%s} on %d frequencies", hurst, k, len(lam))
    return lam, values[0], values[1]
