"""Named defaults shared by the estimators, the numerics and the CLI."""

import math

__all__ = [
    "DEFAULT_H_BOUNDS",
    "DEFAULT_SIGMA_BOUNDS",
    "DEFAULT_H_PLUS",
    "DEFAULT_DELTA_STAR",
    "DEFAULT_TRUNCATION",
    "MIN_DIRECT_TERMS",
    "FREQUENCY_FLOOR",
    "EMBEDDING_TOLERANCE",
    "MAX_EMBEDDING_DOUBLINGS",
    "COARSE_GRID_SIZE",
    "SIMPLEX_TOLERANCE",
    "MAX_OPTIMIZER_EVALUATIONS",
    "MIN_INCREMENTS",
    "MIN_PERIODOGRAM_LENGTH",
    "QUADRATURE_NODES",
    "QUADRATURE_ORDER",
    "QUADRATURE_TOLERANCE",
    "DEGENERACY_TOLERANCE",
]

DEFAULT_H_BOUNDS: tuple[float, float] = (0.05, 0.95)
"""Admissible Hurst interval [H-, H+] when no prior bounds are given."""

DEFAULT_SIGMA_BOUNDS: tuple[float, float] = (0.01, 100.0)
"""Admissible scale interval [sigma-, sigma+] when no prior bounds are given."""

DEFAULT_H_PLUS: float = 0.95
"""Upper Hurst bound driving the pilot block schedule k(n) = ceil(n^(2H+/(2H+ + 1)))."""

DEFAULT_DELTA_STAR: float = math.log(2.0)
"""Limit of log(n) q(n); the grid offset is q = delta*/log(n)."""

DEFAULT_TRUNCATION: int = 64
"""Lattice terms summed directly on each side of j = 0 before the exact tail."""

MIN_DIRECT_TERMS: int = 10
"""Minimum direct terms per residue class before the Euler-Maclaurin tail."""

FREQUENCY_FLOOR: float = 1e-12
"""Smallest |lambda| at which a spectral density is evaluated."""

EMBEDDING_TOLERANCE: float = 1e-10
"""Most negative circulant eigenvalue accepted (clipped to zero) in fGn synthesis."""

MAX_EMBEDDING_DOUBLINGS: int = 8
"""Number of times the circulant embedding is doubled before giving up."""

COARSE_GRID_SIZE: int = 25
"""Points per axis of the coarse (H, log nu) grid preceding Nelder-Mead."""

SIMPLEX_TOLERANCE: float = 1e-7
"""Simplex diameter in (H, log nu) below which a fit counts as converged."""

MAX_OPTIMIZER_EVALUATIONS: int = 2000
"""Contrast evaluations allowed to the Nelder-Mead refinement."""

MIN_INCREMENTS: int = 64
"""Smallest number of (pre-averaged) increments accepted by the estimators."""

MIN_PERIODOGRAM_LENGTH: int = 4
"""Smallest series length accepted by the periodogram."""

QUADRATURE_NODES: int = 4096
"""Gauss-Legendre nodes on the uniform part of the graded rule on (0, pi]."""

QUADRATURE_ORDER: int = 8
"""Gauss-Legendre points per panel."""

QUADRATURE_TOLERANCE: float = 1e-6
"""Relative quadrature error above which a variance report logs a warning."""

DEGENERACY_TOLERANCE: float = 1e-12
"""Relative size below which a Cauchy-Schwarz or Gram determinant is degenerate."""
