"""Pytest configuration for hurstnoise tests."""

import numpy as np
import pytest

import hurstnoise


@pytest.fixture
def rng():
    """Fixed generator for test fixtures that need random input."""
    return np.random.default_rng(20240611)


@pytest.fixture
def noiseless_params():
    return hurstnoise.ModelParams(hurst=0.3, sigma=1.0, tau=0.0, n=4096)


@pytest.fixture
def noiseless_series(noiseless_params):
    """fBm path with H = 0.3 on 4097 grid points, no noise."""
    return hurstnoise.simulate_observations(noiseless_params, seed=11)


@pytest.fixture
def noisy_series():
    """Noisy path at n = 2^14 with a small noise level."""
    params = hurstnoise.ModelParams(hurst=0.3, sigma=1.0, tau=0.01, n=1 << 14)
    return hurstnoise.simulate_observations(params, seed=5)
