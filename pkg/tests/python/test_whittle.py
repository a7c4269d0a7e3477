"""Whittle contrast and its minimisation."""

import logging
import math

import numpy as np
import pytest

import hurstnoise
from hurstnoise.periodogram import Periodogram
from hurstnoise.spectral import CompositeDensity, SpectralModel
from hurstnoise.whittle import ContrastSpec, contrast, minimize


def synthetic_periodogram(values: np.ndarray, N: int, k: int = 1) -> Periodogram:  # noqa: N803
    freqs = 2.0 * math.pi * np.arange(1, N // 2 + 1) / N
    return Periodogram(freqs=freqs, values=np.asarray(values, dtype=np.float64), N=N, block_size=k)


def exact_fit_periodogram(spec: ContrastSpec, h: float, nu: float, N: int) -> Periodogram:  # noqa: N803
    """Periodogram equal to the composite density at (h, nu)."""
    freqs = 2.0 * math.pi * np.arange(1, N // 2 + 1) / N
    g = CompositeDensity(SpectralModel(h, spec.k), nu, spec.tau)(freqs)
    return synthetic_periodogram(g, N, spec.k)


@pytest.fixture
def spec():
    return ContrastSpec(h_lo=0.1, h_hi=0.9, sigma_lo=0.01, sigma_hi=100.0, k=1, n=512)


def test_contrast_spec_validation():
    with pytest.raises(hurstnoise.ParameterError):
        ContrastSpec(h_lo=0.6, h_hi=0.5, sigma_lo=1.0, sigma_hi=2.0, k=1, n=100)
    with pytest.raises(hurstnoise.ParameterError):
        ContrastSpec(h_lo=0.1, h_hi=0.5, sigma_lo=2.0, sigma_hi=1.0, k=1, n=100)
    with pytest.raises(hurstnoise.ParameterError):
        ContrastSpec(h_lo=0.1, h_hi=0.5, sigma_lo=1.0, sigma_hi=2.0, k=200, n=100)


def test_nu_bounds():
    spec = ContrastSpec(h_lo=0.2, h_hi=0.8, sigma_lo=0.5, sigma_hi=4.0, k=8, n=1024)
    lo, hi = spec.nu_bounds
    assert lo == pytest.approx((8 / 1024) ** 0.8 * 0.5)
    assert hi == pytest.approx((8 / 1024) ** 0.2 * 4.0)
    assert spec.sigma_from_nu(0.4, spec.nu_from_sigma(0.4, 1.7)) == pytest.approx(1.7)


@pytest.mark.parametrize("N", [511, 512])
def test_contrast_at_the_true_density(N):  # noqa: N803
    """I = g: the contrast is the folded mean of log g + 1."""
    spec = ContrastSpec(h_lo=0.1, h_hi=0.9, sigma_lo=0.01, sigma_hi=100.0, k=1, n=N)
    pg = exact_fit_periodogram(spec, 0.4, 0.05, N)
    terms = np.log(pg.values) + 1.0
    total = 2.0 * terms.sum() - (terms[-1] if N % 2 == 0 else 0.0)
    assert contrast(spec, pg, 0.4, 0.05) == pytest.approx(total / (2 * N), rel=1e-12)


def test_contrast_scale_shift(spec):
    """tau = 0, I = 0: U(h, c nu) - U(h, nu) = (N - 1) / N log c."""
    N = 512  # noqa: N806
    pg = synthetic_periodogram(np.zeros(N // 2), N)
    shift = contrast(spec, pg, 0.3, 2.5 * 0.01) - contrast(spec, pg, 0.3, 0.01)
    assert shift == pytest.approx((N - 1) / N * math.log(2.5), rel=1e-12)


def test_contrast_rejects_mismatched_block_size(spec):
    pg = synthetic_periodogram(np.ones(8), 16, k=4)
    with pytest.raises(hurstnoise.ParameterError):
        contrast(spec, pg, 0.3, 0.1)


def test_contrast_needs_positive_density(spec):
    pg = synthetic_periodogram(np.ones(8), 16)
    with pytest.raises(hurstnoise.NumericalError):
        contrast(spec, pg, 0.3, 0.0)


def test_minimize_recovers_exact_fit(spec):
    """A periodogram equal to g_{h*, nu*} is minimised at (h*, nu*)."""
    h_star, nu_star = 0.35, 0.8 * 512**-0.35
    fit = minimize(spec, exact_fit_periodogram(spec, h_star, nu_star, 512))
    assert fit.h_hat == pytest.approx(h_star, abs=1e-5)
    assert fit.nu_hat == pytest.approx(nu_star, rel=1e-5)
    assert fit.sigma_hat == pytest.approx(fit.nu_hat * (512 / 1) ** fit.h_hat, rel=1e-14)
    assert fit.converged
    assert not fit.on_boundary
    assert fit.evaluations > 625


def test_minimize_with_noise_and_blocks():
    spec = ContrastSpec(h_lo=0.05, h_hi=0.95, sigma_lo=0.1, sigma_hi=10.0, k=4, n=4 * 257, tau=0.2)
    h_star, nu_star = 0.6, spec.nu_from_sigma(0.6, 1.3)
    fit = minimize(spec, exact_fit_periodogram(spec, h_star, nu_star, 256))
    assert fit.h_hat == pytest.approx(h_star, abs=1e-4)
    assert fit.sigma_hat == pytest.approx(1.3, rel=1e-3)
    assert fit.k == 4


def test_degenerate_hurst_interval():
    """h_lo = h_hi: a one-dimensional search in nu."""
    spec = ContrastSpec(h_lo=0.4, h_hi=0.4, sigma_lo=0.01, sigma_hi=100.0, k=1, n=512)
    nu_star = 0.03
    fit = minimize(spec, exact_fit_periodogram(spec, 0.4, nu_star, 512))
    assert fit.h_hat == 0.4
    assert fit.nu_hat == pytest.approx(nu_star, rel=1e-5)
    assert not fit.boundary_hit["h_lo"] and not fit.boundary_hit["h_hi"]


def test_boundary_solution_is_flagged(caplog):
    spec = ContrastSpec(h_lo=0.1, h_hi=0.5, sigma_lo=0.01, sigma_hi=100.0, k=1, n=512)
    pg = exact_fit_periodogram(spec, 0.8, 512**-0.8, 512)
    with caplog.at_level(logging.WARNING, logger="hurstnoise.whittle"):
        fit = minimize(spec, pg)
    assert fit.h_hat == pytest.approx(0.5)
    assert fit.boundary_hit["h_hi"]
    assert fit.on_boundary
    assert "boundary" in caplog.text


def test_minimize_is_deterministic(noiseless_series):
    spec = ContrastSpec(h_lo=0.05, h_hi=0.95, sigma_lo=0.01, sigma_hi=100.0, k=1, n=4096)
    pg = hurstnoise.periodogram(noiseless_series.increments())
    a, b = minimize(spec, pg), minimize(spec, pg)
    assert (a.h_hat, a.nu_hat, a.contrast) == (b.h_hat, b.nu_hat, b.contrast)


def test_scale_equivariance(noiseless_series):
    """I -> c I with tau -> sqrt(c) tau and scaled sigma bounds: H unchanged, nu scaled."""
    c = 9.0
    y = noiseless_series.increments()
    pg = hurstnoise.periodogram(y)
    scaled = hurstnoise.periodogram(np.sqrt(c) * y.values)
    base = ContrastSpec(h_lo=0.05, h_hi=0.95, sigma_lo=0.01, sigma_hi=100.0, k=1, n=4096, tau=0.001)
    moved = ContrastSpec(
        h_lo=0.05, h_hi=0.95, sigma_lo=0.03, sigma_hi=300.0, k=1, n=4096, tau=0.003
    )
    a, b = minimize(base, pg), minimize(moved, scaled)
    assert b.h_hat == pytest.approx(a.h_hat, abs=1e-6)
    assert b.nu_hat == pytest.approx(3.0 * a.nu_hat, rel=1e-5)


def test_fit_serialisation(spec):
    fit = minimize(spec, exact_fit_periodogram(spec, 0.5, 0.04, 512))
    out = fit.to_dict()
    assert set(out) == {"h", "sigma", "nu", "contrast", "k", "converged", "evaluations", "boundary_hit"}
    assert set(out["boundary_hit"]) == {"h_lo", "h_hi", "nu_lo", "nu_hi"}


def noisy_periodogram(hurst: float, tau: float, n: int, k: int, seed: int) -> Periodogram:
    params = hurstnoise.ModelParams(hurst=hurst, sigma=1.0, tau=tau, n=n)
    z = hurstnoise.simulate_observations(params, seed=seed)
    return hurstnoise.periodogram(hurstnoise.preaverage(z, k))


@pytest.mark.slow
def test_contrast_separates_the_true_hurst():
    """Moving H by 0.1 at the true nu raises the contrast in at least 95% of replicates."""
    n, k, hurst = 1 << 18, 64, 0.3
    spec = ContrastSpec(h_lo=0.05, h_hi=0.95, sigma_lo=0.01, sigma_hi=100.0, k=k, n=n, tau=0.5)
    nu = spec.nu_from_sigma(hurst, 1.0)
    separated = 0
    for seed in range(200):
        pg = noisy_periodogram(hurst, 0.5, n, k, seed)
        at_truth = contrast(spec, pg, hurst, nu)
        separated += at_truth < min(contrast(spec, pg, hurst - 0.1, nu), contrast(spec, pg, hurst + 0.1, nu))
    assert separated >= 190


@pytest.mark.slow
def test_whittle_error_shrinks_with_n():
    """Median |H_hat - H| falls as n grows by factors of four."""
    k, hurst = 4, 0.3
    medians = []
    for n in (1 << 12, 1 << 14, 1 << 16):
        spec = ContrastSpec(h_lo=0.05, h_hi=0.95, sigma_lo=0.01, sigma_hi=100.0, k=k, n=n)
        fits = [minimize(spec, noisy_periodogram(hurst, 0.0, n, k, seed)) for seed in range(60)]
        errors = [abs(fit.h_hat - hurst) for fit in fits]
        medians.append(float(np.median(errors)))
    assert medians[0] > medians[1] > medians[2]
