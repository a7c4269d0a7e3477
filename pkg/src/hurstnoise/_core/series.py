"""Generalized Hurwitz sums for the lattice series of the spectral densities.

The spectral densities are sums over j in Z of terms |x0 + P j|^(-s), possibly
weighted by powers of log|x0 + P j| when differentiated in the Hurst index.
Grouping the two half-lattices gives sums of the form

    S_p(s, q) = sum_{m >= 0} (m + q)^(-s) log(m + q)^p,

which are computed here: a few terms directly, then the exact Hurwitz zeta
(p = 0) or an Euler-Maclaurin tail (p >= 1) from a = q + direct onwards.
"""

import math

import numpy as np
from scipy import special

from hurstnoise.constants import MIN_DIRECT_TERMS

__all__ = ["hurwitz_log_sums", "lattice_log_sums"]

# B_2, B_4, ..., B_12
_BERNOULLI = special.bernoulli(12)[2::2]
_EM_TERMS = len(_BERNOULLI)


def _integral_tail(s: float, a: np.ndarray, p: int) -> np.ndarray:
    """Closed form of the integral of x^(-s) log(x)^p over [a, inf)."""
    log_a = np.log(a)
    total = np.zeros_like(a)
    for i in range(p + 1):
        total += math.perm(p, i) * log_a ** (p - i) / (s - 1.0) ** (i + 1)
    return a ** (1.0 - s) * total


def _euler_maclaurin_tail(s: float, a: np.ndarray, p: int) -> np.ndarray:
    """sum_{m >= 0} g(a + m) for g(x) = x^(-s) log(x)^p, a >= MIN_DIRECT_TERMS."""
    log_a = np.log(a)
    result = _integral_tail(s, a, p)

    # g^(r)(x) = x^(-s-r) * sum_i coeffs[i] * log(x)^i
    coeffs = np.zeros(p + 1)
    coeffs[p] = 1.0

    def _value(order: int, c: np.ndarray) -> np.ndarray:
        poly = np.zeros_like(a)
        for i in range(p, -1, -1):
            poly = poly * log_a + c[i]
        return a ** (-s - order) * poly

    result = result + 0.5 * _value(0, coeffs)
    for r in range(1, 2 * _EM_TERMS):
        t = s + r - 1
        shifted = np.zeros_like(coeffs)
        shifted[:-1] = np.arange(1, p + 1) * coeffs[1:]
        coeffs = -t * coeffs + shifted
        if r % 2 == 1:
            j = (r + 1) // 2
            result = result - _BERNOULLI[j - 1] / math.factorial(2 * j) * _value(r, coeffs)
    return result


def hurwitz_log_sums(
    s: float, q: np.ndarray, max_power: int, direct: int = MIN_DIRECT_TERMS
) -> np.ndarray:
    """Stack of S_p(s, q) for p = 0..max_power.

    Args:
        s: Exponent, s > 1.
        q: Offsets, q > 0 (any shape).
        max_power: Highest log power p (0, 1 or 2 in practice).
        direct: Terms summed explicitly before the analytic tail.

    Returns:
        Array of shape (max_power + 1, *q.shape).
    """
    q = np.asarray(q, dtype=np.float64)
    direct = max(int(direct), MIN_DIRECT_TERMS)
    out = np.zeros((max_power + 1, *q.shape))

    for m in range(direct):
        x = q + m
        term = x ** (-s)
        log_x = np.log(x)
        for p in range(max_power + 1):
            out[p] += term
            term = term * log_x

    a = q + direct
    out[0] += special.zeta(s, a)
    for p in range(1, max_power + 1):
        out[p] += _euler_maclaurin_tail(s, a, p)
    return out


def lattice_log_sums(
    s: float,
    offsets: np.ndarray,
    period: float,
    max_power: int,
    direct: int = MIN_DIRECT_TERMS,
) -> np.ndarray:
    """Two-sided lattice sums sum_{m in Z} |x0 + P m|^(-s) log|x0 + P m|^p.

    Args:
        s: Exponent, s > 1.
        offsets: Lattice offsets x0 with 0 < x0 < P (any shape).
        period: Lattice period P.
        max_power: Highest log power p.
        direct: Terms per half-lattice summed before the tail.

    Returns:
        Array of shape (max_power + 1, *offsets.shape).
    """
    q = np.asarray(offsets, dtype=np.float64) / period
    # right half-lattice x0 + P m = P (m + q), left half |x0 - P (m + 1)| = P (m + 1 - q)
    halves = hurwitz_log_sums(s, q, max_power, direct) + hurwitz_log_sums(
        s, 1.0 - q, max_power, direct
    )

    scale = period ** (-s)
    log_period = math.log(period)
    out = np.empty_like(halves)
    for p in range(max_power + 1):
        acc = np.zeros(q.shape)
        for i in range(p + 1):
            acc += math.comb(p, i) * log_period ** (p - i) * halves[i]
        out[p] = scale * acc
    return out
