"""Numerical kernels: lattice series and graded quadrature."""

from hurstnoise._core.quadrature import GradedRule, graded_rule, integrate
from hurstnoise._core.series import hurwitz_log_sums, lattice_log_sums

__all__ = [
    "GradedRule",
    "graded_rule",
    "integrate",
    "hurwitz_log_sums",
    "lattice_log_sums",
]
