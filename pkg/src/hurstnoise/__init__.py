"""hurstnoise - Hurst index and scale of fractional Brownian motion under additive noise."""

from hurstnoise import constants
from hurstnoise.asymptotics import (
    FisherInfo,
    VarianceReport,
    fast_regime_report,
    fisher_information,
    lower_bounds,
    variance_fast_regime,
    variance_optimal_regime,
)
from hurstnoise.errors import (
    DataError,
    DegeneracyError,
    DomainError,
    HurstNoiseError,
    NumericalError,
    ParameterError,
    SampleTooSmallError,
)
from hurstnoise.estimators import (
    EstimateReport,
    PilotConfig,
    TwoStepConfig,
    estimate,
    grid_round,
    optimal_estimate,
    pilot_estimate,
)
from hurstnoise.periodogram import Periodogram, periodogram
from hurstnoise.spectral import (
    INFINITY,
    CompositeDensity,
    SpectralModel,
    composite_psd,
    dpsd_dH,
    noise_psd,
    psd_limit,
    psd_preaveraged,
)
from hurstnoise.synthesis import (
    IncrementSeries,
    ModelParams,
    ObservationSeries,
    preaverage,
    simulate_fgn,
    simulate_observations,
)
from hurstnoise.whittle import ContrastSpec, WhittleFit, contrast, minimize

__version__ = "0.1.0"

__all__ = [
    # Types
    "ModelParams",
    "ObservationSeries",
    "IncrementSeries",
    "SpectralModel",
    "CompositeDensity",
    "Periodogram",
    "ContrastSpec",
    "WhittleFit",
    "PilotConfig",
    "TwoStepConfig",
    "EstimateReport",
    "VarianceReport",
    "FisherInfo",
    # Synthesis
    "simulate_fgn",
    "simulate_observations",
    "preaverage",
    # Spectral densities
    "INFINITY",
    "psd_preaveraged",
    "psd_limit",
    "dpsd_dH",
    "noise_psd",
    "composite_psd",
    # Estimation
    "periodogram",
    "contrast",
    "minimize",
    "pilot_estimate",
    "grid_round",
    "optimal_estimate",
    "estimate",
    # Asymptotics
    "variance_fast_regime",
    "fast_regime_report",
    "variance_optimal_regime",
    "fisher_information",
    "lower_bounds",
    # Errors
    "HurstNoiseError",
    "ParameterError",
    "SampleTooSmallError",
    "DomainError",
    "NumericalError",
    "DegeneracyError",
    "DataError",
    # Constants
    "constants",
]
