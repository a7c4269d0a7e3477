"""Test-only oracles (dense O(n^3) linear algebra, n <= 4096).

Not imported by `hurstnoise`; import `hurstnoise.testing` explicitly.
"""

from hurstnoise.testing.oracle import (
    ToeplitzOperator,
    TraceLimitRow,
    exact_gaussian_loglik,
    exact_mle,
    kstat_standard_error,
    quadratic_form_cumulant,
    sample_cumulants,
    toeplitz_from_density,
    trace_limit_check,
)

__all__ = [
    "ToeplitzOperator",
    "TraceLimitRow",
    "toeplitz_from_density",
    "quadratic_form_cumulant",
    "trace_limit_check",
    "exact_gaussian_loglik",
    "exact_mle",
    "sample_cumulants",
    "kstat_standard_error",
]
