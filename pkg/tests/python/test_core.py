"""Lattice series and graded quadrature."""

import math

import numpy as np
import pytest
from scipy import special

from hurstnoise._core import graded_rule, hurwitz_log_sums, integrate, lattice_log_sums
from hurstnoise.constants import FREQUENCY_FLOOR


def test_hurwitz_sums_match_zeta():
    q = np.array([0.01, 0.5, 0.99, 3.0])
    sums = hurwitz_log_sums(2.4, q, 0)
    assert sums.shape == (1, 4)
    np.testing.assert_allclose(sums[0], special.zeta(2.4, q), rtol=1e-13)


@pytest.mark.parametrize("s", [1.4, 3.6])
def test_log_weighted_sum_is_zeta_derivative(s):
    """sum (m+q)^-s log(m+q) = -d/ds zeta(s, q)."""
    q = np.array([0.2, 0.75])
    step = 1e-6
    fd = -(special.zeta(s + step, q) - special.zeta(s - step, q)) / (2.0 * step)
    np.testing.assert_allclose(hurwitz_log_sums(s, q, 1)[1], fd, rtol=1e-6)


def test_squared_log_sum_matches_brute_force():
    q = 0.3
    m = np.arange(2_000_000, dtype=np.float64) + q
    brute = np.sum(m**-3.0 * np.log(m) ** 2)
    assert hurwitz_log_sums(3.0, np.array(q), 2)[2] == pytest.approx(brute, rel=1e-8)


def test_lattice_sum_matches_brute_force():
    m = np.arange(-200_000, 200_001, dtype=np.float64)
    x = np.abs(1.0 + 2.0 * math.pi * m)
    sums = lattice_log_sums(3.0, np.array([1.0]), 2.0 * math.pi, 1)
    assert sums[0, 0] == pytest.approx(np.sum(x**-3.0), rel=1e-10)
    assert sums[1, 0] == pytest.approx(np.sum(x**-3.0 * np.log(x)), rel=1e-9)


def test_graded_rule_is_cached_and_floored():
    rule = graded_rule(1024)
    assert graded_rule(1024) is rule
    assert 2.0 * FREQUENCY_FLOOR < rule.floor <= 4.0 * FREQUENCY_FLOOR
    assert np.all(rule.points > rule.floor)
    assert np.all(rule.weights > 0.0)
    assert rule.weights.sum() + rule.floor == pytest.approx(math.pi, rel=1e-13)


def test_graded_rule_validates_size():
    with pytest.raises(ValueError):
        graded_rule(4, 8)


def test_integrable_singularity():
    """int_0^pi x^(-1/2) dx = 2 sqrt(pi)."""
    value, error = integrate(lambda x: x**-0.5)
    assert value == pytest.approx(2.0 * math.sqrt(math.pi), rel=1e-10)
    assert error < 1e-8


def test_logarithmic_singularity():
    """int_0^pi log x dx = pi log pi - pi."""
    value, _ = integrate(np.log)
    assert value == pytest.approx(math.pi * math.log(math.pi) - math.pi, rel=1e-9)


def test_vector_valued_integrand():
    value, error = integrate(lambda x: np.stack([np.sin(x), x]))
    np.testing.assert_allclose(value, [2.0, math.pi**2 / 2.0], rtol=1e-12)
    assert error.shape == (2,)


def test_endpoint_falls_back_on_sign_change():
    """Values of opposite sign at floor and floor / 2 use the rectangle rule."""
    rule = graded_rule(256)
    assert rule.endpoint(np.array(1.0), np.array(-1.0)) == pytest.approx(rule.floor)
    assert rule.endpoint(np.array(2.0), np.array(2.0)) == pytest.approx(2.0 * rule.floor)
