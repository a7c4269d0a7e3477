"""CSV and JSON readers/writers with provenance.

Series CSV: header `z`, one value per line. Its metadata sidecar is the same
path with `.json` appended: {n, hurst, sigma, tau, seed, version, config}.
"""

import csv
import json
import logging
import sys
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from hurstnoise.errors import DataError, ParameterError
from hurstnoise.synthesis import ModelParams, ObservationSeries

__all__ = [
    "sidecar_path",
    "write_series_csv",
    "read_series_csv",
    "dump_json",
    "write_json",
    "write_table_csv",
]

logger = logging.getLogger(__name__)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def sidecar_path(path: Path | str) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def write_json(payload: dict, path: Path | str | None = None) -> None:
    """Write payload to path, or to standard output when path is None."""
    text = dump_json(payload)
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)
    logger.info("wrote %s", path)


def write_series_csv(path: Path | str, series: ObservationSeries, provenance: dict | None = None) -> Path:
    """Write the series CSV and its metadata sidecar; returns the sidecar path."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write("z\n")
        fh.writelines(_fmt(v) + "\n" for v in series.values)
    meta: dict = {"n": series.n, "seed": series.seed}
    if series.params is not None:
        meta.update(series.params.to_dict())
    if provenance:
        meta.update(provenance)
    sidecar = sidecar_path(path)
    write_json(meta, sidecar)
    logger.info("wrote %d observations to %s", len(series.values), path)
    return sidecar


def _read_sidecar(path: Path) -> tuple[ModelParams | None, int | None]:
    sidecar = sidecar_path(path)
    if not sidecar.exists():
        return None, None
    try:
        meta = json.loads(sidecar.read_text())
    except json.JSONDecodeError as e:
        raise DataError(f"invalid JSON ({e.msg})", sidecar, e.lineno) from e
    seed = meta.get("seed")
    try:
        params = ModelParams(
            hurst=float(meta["hurst"]),
            sigma=float(meta["sigma"]),
            tau=float(meta["tau"]),
            n=int(meta["n"]),
        )
    except (KeyError, TypeError, ValueError, ParameterError):
        params = None
    return params, None if seed is None else int(seed)


def read_series_csv(path: Path | str) -> ObservationSeries:
    """Read a one-column series CSV (header `z` optional) and its sidecar if present.

    Raises:
        DataError: on a malformed line, naming the file and 1-based line number.
        FileNotFoundError: if the file does not exist.
    """
    path = Path(path)
    values: list[float] = []
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if lineno == 1 and row[0].strip().lower() == "z":
                continue
            if len(row) != 1:
                raise DataError(f"expected one column, got {len(row)}", path, lineno)
            try:
                value = float(row[0])
            except ValueError as e:
                raise DataError(f"not a number: {row[0]!r}", path, lineno) from e
            if not np.isfinite(value):
                raise DataError(f"non-finite value {row[0]!r}", path, lineno)
            values.append(value)
    if len(values) < 2:
        raise DataError(f"need at least 2 observations, got {len(values)}", path)

    params, seed = _read_sidecar(path)
    if params is not None and params.n + 1 != len(values):
        logger.warning("%s: sidecar n=%d does not match %d values; ignoring it", path, params.n, len(values))
        params = None
    return ObservationSeries(values=np.array(values), params=params, seed=seed)


def write_table_csv(
    header: Sequence[str], rows: Iterable[Sequence], path: Path | str | None = None
) -> None:
    """Write a CSV table; floats use 17 significant digits, None becomes an empty cell."""

    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, float | np.floating):
            return _fmt(value)
        return str(value)

    fh = sys.stdout if path is None else Path(path).open("w", newline="")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([cell(v) for v in row] for row in rows)
    finally:
        if path is not None:
            fh.close()
            logger.info("wrote %s", path)
