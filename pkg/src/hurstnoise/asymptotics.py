"""Limit variances and information matrices of the Whittle estimators.

All spectral integrals run over [-pi, pi]; the integrands are even, so they
are computed as twice the integral over (0, pi] with the graded rule of
`hurstnoise._core.quadrature`.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from hurstnoise._core.quadrature import integrate
from hurstnoise.constants import DEGENERACY_TOLERANCE, QUADRATURE_NODES, QUADRATURE_TOLERANCE
from hurstnoise.errors import DegeneracyError, ParameterError
from hurstnoise.spectral import INFINITY, SpectralModel, noise_psd

__all__ = [
    "VarianceReport",
    "FisherInfo",
    "rate_exponent",
    "gamma_star",
    "variance_fast_regime",
    "fast_regime_report",
    "variance_optimal_regime",
    "fisher_information",
    "lower_bounds",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VarianceReport:
    """Limit variance of the H-estimator under its rate, with the sigma multiplier.

    Attributes:
        var_h: Variance of the limit X.
        var_sigma_factor: sd(sigma limit) / sd(H limit), squared.
        gamma_star: exp(-2 delta* / (2H + 1)) in the rate-optimal regime.
        rate_factor: (gamma*)^(-1/(4H+2)), or 1 outside the rate-optimal regime.
        quadrature_error: Largest relative change of an integral against the
            rule with half the nodes.
    """

    var_h: float
    var_sigma_factor: float
    gamma_star: float | None = None
    rate_factor: float = 1.0
    quadrature_error: float = 0.0

    @property
    def sd_h(self) -> float:
        """Standard deviation of the rate-scaled H error, rate factor included."""
        return self.rate_factor * math.sqrt(self.var_h)

    @property
    def sd_sigma(self) -> float:
        return self.sd_h * math.sqrt(self.var_sigma_factor)

    def to_dict(self) -> dict:
        return {
            "var_h": self.var_h,
            "var_sigma_factor": self.var_sigma_factor,
            "gamma_star": self.gamma_star,
            "rate_factor": self.rate_factor,
            "sd_h": self.sd_h,
            "sd_sigma": self.sd_sigma,
            "quadrature_error": self.quadrature_error,
        }


@dataclass(frozen=True, eq=False)
class FisherInfo:
    """2x2 Fisher information of the LAN expansion in the given local directions."""

    matrix: np.ndarray
    parametrization: str = "local (H, sigma) directions"

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


def rate_exponent(hurst: float) -> float:
    """1 / (4H + 2): the rate n^(1/(4H+2)) of the rate-optimal regime."""
    return 1.0 / (4.0 * hurst + 2.0)


def gamma_star(delta_star: float, h0: float) -> float:
    """exp(-2 delta* / (2 H0 + 1))."""
    return math.exp(-2.0 * delta_star / (2.0 * h0 + 1.0))


def _check_hurst(hurst: float) -> None:
    if not 0.0 < hurst < 1.0:
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")


def _log_derivative_integrals(
    density: SpectralModel, nodes: int
) -> tuple[float, float, float]:
    """(int d_H log f, int (d_H log f)^2) over [-pi, pi], and the quadrature error."""

    def integrand(lam: np.ndarray) -> np.ndarray:
        f, df = density.derivatives(lam, 1)
        score = df / f
        return np.stack([score, score**2])

    value, error = integrate(integrand, nodes)
    return 2.0 * float(value[0]), 2.0 * float(value[1]), float(np.max(error))


def _warn_quadrature(error: float, what: str) -> None:
    if error > QUADRATURE_TOLERANCE:
        logger.warning("%s: relative quadrature error %.2e above %.0e", what, error, QUADRATURE_TOLERANCE)


def _fast_variance(density: SpectralModel, nodes: int) -> tuple[float, float]:
    first, second, error = _log_derivative_integrals(density, nodes)
    mean = first / (2.0 * math.pi)
    denominator = second / (2.0 * math.pi) - mean**2
    if denominator <= DEGENERACY_TOLERANCE * max(second / (2.0 * math.pi), 1.0):
        raise DegeneracyError(
            f"d_H log f is constant in lambda for H={density.hurst}, k={density.block_size}: "
            f"Cauchy-Schwarz gap {denominator:.3e}"
        )
    return 2.0 / denominator, error


def variance_fast_regime(
    hurst: float, density: SpectralModel | None = None, nodes: int = QUADRATURE_NODES
) -> float:
    """2 / ((1/2pi) int (d_H f / f)^2 - ((1/2pi) int d_H f / f)^2).

    Args:
        hurst: Hurst index at which the density is evaluated.
        density: Model whose block size (and truncation) is used; defaults
            to the limit density f_{H,inf}.
        nodes: Uniform nodes of the graded rule.
    """
    _check_hurst(hurst)
    model = (density or SpectralModel(hurst, INFINITY)).with_hurst(hurst)
    variance, error = _fast_variance(model, nodes)
    _warn_quadrature(error, "fast-regime variance")
    return variance


def fast_regime_report(
    h0: float, sigma0: float, density: SpectralModel | None = None, nodes: int = QUADRATURE_NODES
) -> VarianceReport:
    """Variance of the sqrt(n)-limit (X, sigma0 X) of the plain and pilot Whittle estimators."""
    _check_hurst(h0)
    if sigma0 <= 0.0:
        raise ParameterError(f"sigma0 must be positive, got {sigma0}")
    model = (density or SpectralModel(h0, INFINITY)).with_hurst(h0)
    variance, error = _fast_variance(model, nodes)
    _warn_quadrature(error, "fast-regime variance")
    return VarianceReport(var_h=variance, var_sigma_factor=sigma0**2, quadrature_error=error)


def variance_optimal_regime(
    h0: float, sigma0: float, tau: float, gamma_star: float, nodes: int = QUADRATURE_NODES
) -> VarianceReport:
    """Limit variance of the two-step estimator under the rate n^(1/(4H0+2)).

    With f = f_{H0,inf} and f* = (sigma0^2 f + gamma* tau^2 l)^2,

        var = (4 pi / sigma0^4) A / (A B - C^2),
        A = int f^2 / f*,  B = int (d_H f)^2 / f*,  C = int f d_H f / f*.

    The sigma limit is sigma0 / (2H0 + 1) times the H limit; both carry the
    factor (gamma*)^(-1/(4H0+2)).
    """
    _check_hurst(h0)
    if sigma0 <= 0.0 or tau < 0.0 or gamma_star <= 0.0:
        raise ParameterError(
            f"need sigma0 > 0, tau >= 0, gamma_star > 0; got {sigma0}, {tau}, {gamma_star}"
        )
    model = SpectralModel(h0, INFINITY)

    def integrand(lam: np.ndarray) -> np.ndarray:
        f, df = model.derivatives(lam, 1)
        weight = (sigma0**2 * f + gamma_star * tau**2 * noise_psd(lam)) ** 2
        return np.stack([f * f / weight, df * df / weight, f * df / weight])

    value, error = integrate(integrand, nodes)
    a, b, c = 2.0 * value
    gram = a * b - c * c
    if gram <= DEGENERACY_TOLERANCE * a * b:
        raise DegeneracyError(f"Gram determinant {gram:.3e} vanishes at H0={h0}, tau={tau}")
    quadrature_error = float(np.max(error))
    _warn_quadrature(quadrature_error, "rate-optimal variance")

    return VarianceReport(
        var_h=float(4.0 * math.pi / sigma0**4 * a / gram),
        var_sigma_factor=(sigma0 / (2.0 * h0 + 1.0)) ** 2,
        gamma_star=gamma_star,
        rate_factor=gamma_star ** (-rate_exponent(h0)),
        quadrature_error=quadrature_error,
    )


def fisher_information(
    h0: float,
    sigma0: float,
    density: SpectralModel | None = None,
    alpha: float = 1.0,
    alpha_bar: float = 0.0,
    gamma: float = 0.0,
    gamma_bar: float | None = None,
    nodes: int = QUADRATURE_NODES,
) -> FisherInfo:
    """Fisher information (1/4pi) D M D^T for the direction matrix D.

    D = [[gamma, -alpha], [gamma_bar, -alpha_bar]] and
    M = [[8 pi, -2 int d_H log f], [-2 int d_H log f, int (d_H log f)^2]].
    The defaults (alpha=1, alpha_bar=0, gamma=0, gamma_bar=1/sigma0) give the
    directions of the separate H and sigma lower bounds.
    """
    _check_hurst(h0)
    if gamma_bar is None:
        gamma_bar = 1.0 / sigma0
    if abs(alpha * gamma_bar - alpha_bar * gamma) <= DEGENERACY_TOLERANCE:
        raise ParameterError(
            f"degenerate directions: alpha*gamma_bar - alpha_bar*gamma = "
            f"{alpha * gamma_bar - alpha_bar * gamma}"
        )
    model = (density or SpectralModel(h0, INFINITY)).with_hurst(h0)
    first, second, error = _log_derivative_integrals(model, nodes)
    _warn_quadrature(error, "Fisher information")

    directions = np.array([[gamma, -alpha], [gamma_bar, -alpha_bar]])
    central = np.array([[8.0 * math.pi, -2.0 * first], [-2.0 * first, second]])
    matrix = directions @ central @ directions.T / (4.0 * math.pi)
    return FisherInfo(matrix=0.5 * (matrix + matrix.T))


def lower_bounds(
    h0: float, sigma0: float, density: SpectralModel | None = None, nodes: int = QUADRATURE_NODES
) -> tuple[float, float]:
    """Minimax constants (v0^2, v0^2 sigma0^2) for n E(H-hat - H)^2 and n/log(n)^2 E(sigma-hat - sigma)^2.

    v0^2 = 2 ((1/2pi) int (d_H log f)^2 - ((1/2pi) int d_H log f)^2)^(-1).
    """
    v0_sq = variance_fast_regime(h0, density, nodes)
    return v0_sq, v0_sq * sigma0**2
