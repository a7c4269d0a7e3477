"""Run configuration: defaults < key-value config file < command-line flags.

The config file is INI syntax; keys sit in a `[run]` section or at the top
level and mirror the long flags (`h-bounds = 0.1,0.6` or `h_bounds = 0.1,0.6`).
"""

import configparser
import dataclasses
import logging
import math
from dataclasses import dataclass, fields
from pathlib import Path

from hurstnoise.constants import (
    DEFAULT_DELTA_STAR,
    DEFAULT_H_BOUNDS,
    DEFAULT_SIGMA_BOUNDS,
)
from hurstnoise.errors import ParameterError
from hurstnoise.estimators import PilotConfig, TwoStepConfig
from hurstnoise.montecarlo import McConfig
from hurstnoise.synthesis import ModelParams

__all__ = ["COMMANDS", "RunConfig", "parse_pair", "parse_block_size", "load_config_file"]

logger = logging.getLogger(__name__)

COMMANDS = ("simulate", "estimate", "mc-study", "variance", "psd-table")

SECTION = "run"


def parse_pair(text: str) -> tuple[float, float]:
    """'LO,HI' -> (LO, HI)."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise ParameterError(f"expected LO,HI, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as e:
        raise ParameterError(f"expected two numbers LO,HI, got {text!r}") from e
    if lo > hi:
        raise ParameterError(f"lower bound above upper bound in {text!r}")
    return lo, hi


def parse_block_size(text: str) -> float:
    """Integer block size or 'inf' for the limit density."""
    if str(text).strip().lower() in ("inf", "infinity"):
        return float("inf")
    try:
        return int(text)
    except ValueError as e:
        raise ParameterError(f"block size must be an integer or 'inf', got {text!r}") from e


def _parse_bool(text: str) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ParameterError(f"expected a boolean, got {text!r}")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings of one CLI run; serialised into every output."""

    command: str = "estimate"
    n: int | None = None
    hurst: float | None = None
    sigma: float = 1.0
    tau: float | None = None
    seed: int | None = None
    replicates: int = 200
    h_bounds: tuple[float, float] = DEFAULT_H_BOUNDS
    sigma_bounds: tuple[float, float] = DEFAULT_SIGMA_BOUNDS
    delta_star: float = DEFAULT_DELTA_STAR
    grid_m: int | None = None
    pilot_only: bool = False
    k: float | None = None
    regime: str = "optimal"
    points: int = 256
    workers: int = 1
    input: str | None = None
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.format not in ("csv", "json"):
            raise ParameterError(f"format must be csv or json, got {self.format!r}")

    def require(self, *names: str) -> None:
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--" + name.replace("_", "-") for name in missing)
            raise ParameterError(f"{self.command} needs {flags}")

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        if self.k is not None and math.isinf(self.k):
            out["k"] = "inf"
        return out

    def model_params(self) -> ModelParams:
        self.require("n", "hurst")
        return ModelParams(hurst=self.hurst, sigma=self.sigma, tau=self.tau or 0.0, n=self.n)

    def pilot_config(self, tau: float | None = None) -> PilotConfig:
        if self.k is not None and math.isinf(self.k):
            raise ParameterError(f"{self.command} needs a finite --k, got inf")
        block = None if self.k is None else int(self.k)
        return PilotConfig(
            h_bounds=self.h_bounds,
            sigma_bounds=self.sigma_bounds,
            tau=tau if tau is not None else (self.tau or 0.0),
            block_size=block,
        )

    def two_step_config(self) -> TwoStepConfig:
        return TwoStepConfig(
            delta_star=self.delta_star, m=self.grid_m, h_bounds=self.h_bounds, seed=self.seed
        )

    def mc_config(self, seed: int) -> McConfig:
        return McConfig(
            params=self.model_params(),
            replicates=self.replicates,
            seed=seed,
            regime=self.regime,
            pilot=self.pilot_config(),
            two_step=dataclasses.replace(self.two_step_config(), seed=None),
        )

    @classmethod
    def from_sources(cls, config_file: Path | str | None = None, **flags) -> "RunConfig":
        """Merge defaults, the config file (if any) and the flags that are not None."""
        values: dict = {}
        if config_file is not None:
            values.update(load_config_file(config_file))
        values.update({key: value for key, value in flags.items() if value is not None})
        return cls(**values)


_CONVERTERS = {
    "n": int,
    "hurst": float,
    "sigma": float,
    "tau": float,
    "seed": int,
    "replicates": int,
    "h_bounds": parse_pair,
    "sigma_bounds": parse_pair,
    "delta_star": float,
    "grid_m": int,
    "pilot_only": _parse_bool,
    "k": parse_block_size,
    "regime": str,
    "points": int,
    "workers": int,
    "input": str,
    "out": str,
    "format": str,
}


def load_config_file(path: Path | str) -> dict:
    """Read a key-value config file into RunConfig field values.

    Raises:
        ParameterError: on syntax errors, unknown keys or values that do not parse,
            or when the file cannot be read.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParameterError(f"{path}: cannot read config file: {e.strerror or e}") from e
    parser = configparser.ConfigParser()
    try:
        if not any(line.strip().startswith("[") for line in text.splitlines()):
            text = f"[{SECTION}]\n" + text
        parser.read_string(text, source=str(path))
    except configparser.Error as e:
        raise ParameterError(f"{path}: invalid config file: {e.message}") from e

    known = {f.name for f in fields(RunConfig)} - {"command"}
    values: dict = {}
    section = parser[SECTION] if parser.has_section(SECTION) else parser[parser.default_section]
    for raw_key, raw_value in section.items():
        key = raw_key.replace("-", "_")
        if key not in known:
            raise ParameterError(f"{path}: unknown config key {raw_key!r}")
        try:
            values[key] = _CONVERTERS[key](raw_value)
        except (ValueError, ParameterError) as e:
            raise ParameterError(f"{path}: invalid value for {raw_key}: {raw_value!r}") from e
    logger.debug("config file %s: %s", path, sorted(values))
    return values
