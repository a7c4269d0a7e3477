"""Pilot and two-step estimators."""

import dataclasses
import logging
import math

import pytest

import hurstnoise
from hurstnoise.estimators import (
    TwoStepConfig,
    default_grid_resolution,
    min_pilot_intervals,
    optimal_block_size,
    pilot_block_size,
    pilot_report,
)
from hurstnoise.seeding import substream

NARROW = (0.05, 0.6)


def test_block_schedules():
    n = 1 << 16
    assert pilot_block_size(n, 0.95) == math.ceil(n ** (1.9 / 2.9))
    assert optimal_block_size(n, 0.3) == math.floor(n ** (0.6 / 1.6))
    assert default_grid_resolution(n, 0.95) == math.ceil(n ** (1.0 / 5.8) / math.log(n))
    assert default_grid_resolution(16, 0.95) == 1


def test_grid_round_hand_example():
    cfg = TwoStepConfig(m=10, q=0.05, h_bounds=(0.1, 0.9))
    assert hurstnoise.grid_round(0.3, cfg, 0.2) == pytest.approx(0.42)


def test_grid_round_at_the_lower_bound():
    cfg = TwoStepConfig(m=10, q=0.0, h_bounds=(0.1, 0.9))
    assert hurstnoise.grid_round(0.1, cfg, 0.0) == pytest.approx(0.1)


def test_grid_round_is_monotone():
    cfg = TwoStepConfig(m=7, q=0.03, h_bounds=(0.05, 0.95))
    points = [hurstnoise.grid_round(0.05 + 0.01 * i, cfg, 0.37) for i in range(80)]
    assert all(b >= a for a, b in zip(points, points[1:], strict=False))
    assert all(p >= 0.05 + 0.01 * i for i, p in enumerate(points))


@pytest.mark.parametrize("u", [0.0, 0.37, 0.99])
def test_grid_round_stays_within_one_step(u):
    """The grid point lies in [h + q, h + q + (u + 1) w / m), above h + q - w / m."""
    cfg = TwoStepConfig(m=7, q=0.03, h_bounds=(0.05, 0.95))
    step = 0.9 / 7
    for i in range(61):
        h = 0.05 + 0.01 * i
        h_grid = hurstnoise.grid_round(h, cfg, u)
        assert h_grid >= h + cfg.q - step - 1e-12
        assert h_grid >= h + cfg.q - 1e-12
        assert h_grid <= h + cfg.q + (u + 1.0) * step + 1e-12


def test_grid_round_clamps_and_warns(caplog):
    cfg = TwoStepConfig(m=10, q=0.05, h_bounds=(0.1, 0.9))
    with caplog.at_level(logging.WARNING, logger="hurstnoise.estimators"):
        assert hurstnoise.grid_round(0.9, cfg, 0.5) == pytest.approx(0.9)
    assert "clamped" in caplog.text


def test_grid_round_needs_resolved_config():
    with pytest.raises(hurstnoise.ParameterError):
        hurstnoise.grid_round(0.3, TwoStepConfig(), 0.1)
    with pytest.raises(hurstnoise.ParameterError):
        hurstnoise.grid_round(0.3, TwoStepConfig(m=4, q=0.1), 1.0)


def test_two_step_resolution(caplog):
    n = 1 << 16
    resolved = TwoStepConfig().resolved(n)
    assert resolved.q == pytest.approx(math.log(2.0) / math.log(n))
    assert resolved.m == default_grid_resolution(n, 0.95)
    with caplog.at_level(logging.WARNING, logger="hurstnoise.estimators"):
        TwoStepConfig(m=2).resolved(n)
    assert "outside" in caplog.text


def test_config_validation():
    with pytest.raises(hurstnoise.ParameterError):
        hurstnoise.PilotConfig(h_bounds=(0.5, 1.0))
    with pytest.raises(hurstnoise.ParameterError):
        hurstnoise.PilotConfig(tau=-1.0)
    with pytest.raises(hurstnoise.ParameterError):
        TwoStepConfig(delta_star=0.0)


@pytest.mark.parametrize("h_plus", [0.5, 0.6, 0.95])
def test_min_pilot_intervals(h_plus):
    n = min_pilot_intervals(h_plus)
    assert (n + 1) // pilot_block_size(n, h_plus) - 1 >= 64
    assert n // pilot_block_size(n - 1, h_plus) - 1 < 64


def test_default_bounds_reject_short_series():
    """H+ = 0.95 at n = 2^16 leaves 44 increments; the pilot says which n it needs."""
    assert 1 << 17 < min_pilot_intervals(0.95) < 1 << 18
    params = hurstnoise.ModelParams(hurst=0.3, sigma=1.0, tau=0.01, n=1 << 16)
    z = hurstnoise.simulate_observations(params, seed=7)
    with pytest.raises(hurstnoise.SampleTooSmallError, match=f"needs n >= {min_pilot_intervals(0.95)}"):
        hurstnoise.pilot_estimate(z)
    fit = hurstnoise.pilot_estimate(z, hurstnoise.PilotConfig(h_bounds=(0.05, 0.5), tau=0.01))
    assert fit.k == 256


def test_pilot_needs_enough_increments():
    params = hurstnoise.ModelParams(hurst=0.3, sigma=1.0, tau=0.0, n=100)
    z = hurstnoise.simulate_observations(params, seed=1)
    with pytest.raises(hurstnoise.SampleTooSmallError):
        hurstnoise.pilot_estimate(z, hurstnoise.PilotConfig(block_size=8))


def test_plain_whittle_estimator(noiseless_series):
    """tau = 0 and k = 1: the plain Whittle estimator."""
    cfg = hurstnoise.PilotConfig(block_size=1)
    fit = hurstnoise.pilot_estimate(noiseless_series, cfg)
    assert fit.k == 1
    assert abs(fit.h_hat - 0.3) < 0.06
    assert fit.sigma_hat == pytest.approx(fit.nu_hat * noiseless_series.n**fit.h_hat, rel=1e-12)
    assert abs(math.log(fit.sigma_hat)) < 0.5
    again = hurstnoise.pilot_estimate(noiseless_series, cfg)
    assert (again.h_hat, again.nu_hat) == (fit.h_hat, fit.nu_hat)


def test_pilot_only_report(noiseless_series):
    cfg = hurstnoise.PilotConfig(block_size=1)
    report = hurstnoise.estimate(noiseless_series, cfg, pilot_only=True)
    assert report.pilot_only
    assert report.final is report.pilot
    assert 0.0 < report.asymptotic_sd_h < 0.1
    assert report.asymptotic_sd_sigma > 0.0
    out = report.to_dict()
    assert "optimal" not in out and "h_grid" not in out and "k_opt" not in out
    assert out["seeds"] == {"master": 11}


def test_pilot_report_uses_the_raw_density_for_k1(noiseless_series):
    fit = hurstnoise.pilot_estimate(noiseless_series, hurstnoise.PilotConfig(block_size=1))
    report = pilot_report(noiseless_series, fit)
    expected = hurstnoise.fast_regime_report(fit.h_hat, fit.sigma_hat, hurstnoise.SpectralModel(fit.h_hat, 1))
    assert report.asymptotic_sd_h == pytest.approx(expected.sd_h / math.sqrt(noiseless_series.n))


def test_two_step_estimator(noisy_series):
    pilot_cfg = hurstnoise.PilotConfig(h_bounds=NARROW, tau=0.01)
    report = hurstnoise.estimate(noisy_series, pilot_cfg, TwoStepConfig(m=3))
    n = noisy_series.n
    assert not report.pilot_only
    assert report.pilot.k == pilot_block_size(n, 0.6)
    assert NARROW[0] <= report.h_grid <= NARROW[1]
    assert report.k_opt == optimal_block_size(n, report.h_grid)
    assert report.optimal.k == report.k_opt
    assert report.optimal.h_hat <= report.h_grid
    assert abs(report.optimal.h_hat - 0.3) < 0.25
    assert report.asymptotic_sd_h > 0.0

    # U comes from the series seed when the two-step config has none
    assert report.seeds == {"master": 5, "grid": 5}
    assert report.u == substream(5, "grid").random()
    out = report.to_dict()
    assert {"pilot", "h_grid", "k_opt", "optimal", "asymptotic_sd", "seeds"} <= set(out)


def test_two_step_seed_overrides_series_seed(noisy_series):
    pilot_cfg = hurstnoise.PilotConfig(h_bounds=NARROW, tau=0.01)
    pilot = hurstnoise.pilot_estimate(noisy_series, pilot_cfg)
    cfg = TwoStepConfig(m=3, h_bounds=NARROW, seed=99)
    report = hurstnoise.optimal_estimate(noisy_series, pilot, cfg, pilot_cfg)
    assert report.seeds["grid"] == 99
    assert report.u == substream(99, "grid").random()
    repeat = hurstnoise.optimal_estimate(noisy_series, pilot, cfg, pilot_cfg)
    assert repeat.optimal.h_hat == report.optimal.h_hat


def test_pilot_does_not_depend_on_the_grid_seed(noisy_series):
    pilot_cfg = hurstnoise.PilotConfig(h_bounds=NARROW, tau=0.01)
    a = hurstnoise.estimate(noisy_series, pilot_cfg, TwoStepConfig(m=3, seed=1))
    b = hurstnoise.estimate(noisy_series, pilot_cfg, TwoStepConfig(m=3, seed=2))
    assert a.u != b.u
    assert a.pilot == b.pilot
    assert (a.pilot.h_hat, a.pilot.nu_hat) == (b.pilot.h_hat, b.pilot.nu_hat)


def test_optimal_block_must_exceed_one(noisy_series):
    pilot_cfg = hurstnoise.PilotConfig(h_bounds=(0.01, 0.02), tau=0.01, block_size=1)
    pilot = dataclasses.replace(
        hurstnoise.pilot_estimate(noisy_series, pilot_cfg), h_hat=0.01
    )
    cfg = TwoStepConfig(m=1, q=0.0, h_bounds=(0.01, 0.02))
    with pytest.raises(hurstnoise.SampleTooSmallError):
        hurstnoise.optimal_estimate(noisy_series, pilot, cfg, pilot_cfg)
