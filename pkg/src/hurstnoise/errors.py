"""Exception hierarchy and the exit codes the CLI maps it to."""

from pathlib import Path

__all__ = [
    "HurstNoiseError",
    "ParameterError",
    "SampleTooSmallError",
    "DomainError",
    "NumericalError",
    "DegeneracyError",
    "DataError",
    "EXIT_OK",
    "EXIT_CONFIG",
    "EXIT_DATA",
    "EXIT_NUMERICAL",
    "exit_code_for",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class HurstNoiseError(Exception):
    """Base class of every error raised by hurstnoise."""


class ParameterError(HurstNoiseError, ValueError):
    """A parameter lies outside its admissible range."""


class SampleTooSmallError(ParameterError):
    """Too few observations or increments for the requested procedure."""


class DomainError(HurstNoiseError, ValueError):
    """A spectral density was evaluated outside its domain (lambda = 0)."""


class NumericalError(HurstNoiseError, ArithmeticError):
    """A numerical invariant failed (positivity, definiteness, quadrature)."""


class DegeneracyError(NumericalError):
    """A Cauchy-Schwarz or Gram determinant vanished: the model is not identifiable."""


class DataError(HurstNoiseError):
    """Malformed input data, located by file and 1-based line number."""

    def __init__(self, message: str, path: Path | str | None = None, line: int | None = None):
        self.path = Path(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None:
            location = f"{self.path}:{line}: " if line is not None else f"{self.path}: "
        super().__init__(f"{location}{message}")


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code."""
    if isinstance(exc, DataError | FileNotFoundError | IsADirectoryError | PermissionError):
        return EXIT_DATA
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, ParameterError | DomainError):
        return EXIT_CONFIG
    return 1
