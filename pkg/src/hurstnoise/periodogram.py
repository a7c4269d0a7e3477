"""Periodogram of an increment series at the positive Fourier frequencies."""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hurstnoise.constants import MIN_PERIODOGRAM_LENGTH
from hurstnoise.errors import SampleTooSmallError
from hurstnoise.synthesis import IncrementSeries

__all__ = ["Periodogram", "periodogram"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Periodogram:
    """I_N(lam_j) at lam_j = 2 pi j / N, j = 1..floor(N/2).

    `zero` holds I_N(0) = |sum Y|^2 / N, which the contrast never uses but the
    two-sided reconstruction needs.
    """

    freqs: np.ndarray
    values: np.ndarray
    N: int  # noqa: N815
    zero: float = 0.0
    block_size: int = 1

    def __len__(self) -> int:
        return len(self.values)

    @property
    def has_nyquist(self) -> bool:
        return self.N % 2 == 0

    def to_two_sided(self) -> np.ndarray:
        """I_N at all N Fourier frequencies 2 pi j / N, j = 0..N-1."""
        full = np.empty(self.N)
        full[0] = self.zero
        half = len(self.values)
        full[1 : half + 1] = self.values
        mirror = half - 1 if self.has_nyquist else half
        full[half + 1 :] = self.values[:mirror][::-1]
        return full

    def to_csv(self, path: Path | str) -> None:
        np.savetxt(
            path,
            np.column_stack([self.freqs, self.values]),
            delimiter=",",
            header="lambda,periodogram",
            comments="",
            fmt="%.17g",
        )


def periodogram(y: IncrementSeries | np.ndarray) -> Periodogram:
    """I_N(lam) = N^-1 |sum_k e^(i k lam) Y_k|^2 at the positive Fourier frequencies.

    No tapering and no mean-centering.

    Raises:
        SampleTooSmallError: if N < 4.
    """
    if isinstance(y, IncrementSeries):
        values, block_size = y.values, y.block_size
    else:
        values, block_size = np.asarray(y, dtype=np.float64), 1
    N = len(values)  # noqa: N806
    if N < MIN_PERIODOGRAM_LENGTH:
        raise SampleTooSmallError(
            f"periodogram needs at least {MIN_PERIODOGRAM_LENGTH} values, got {N}"
        )
    power = np.abs(np.fft.rfft(values)) ** 2 / N
    half = N // 2
    freqs = 2.0 * np.pi * np.arange(1, half + 1) / N
    logger.debug("periodogram of N=%d increments (k=%d)", N, block_size)
    return Periodogram(
        freqs=freqs,
        values=power[1 : half + 1],
        N=N,
        zero=float(power[0]),
        block_size=block_size,
    )
