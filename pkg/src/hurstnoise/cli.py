"""Command-line front end.

    hurstnoise simulate   --n 65536 --hurst 0.3 --tau 0.01 --seed 7 --out z.csv
    hurstnoise estimate   z.csv --tau 0.01 --h-bounds 0.05,0.5
    hurstnoise mc-study   --n 16384 --hurst 0.3 --k 1 --regime fast --replicates 200 --seed 1
    hurstnoise variance   --hurst 0.3 --regime optimal --tau 0.01
    hurstnoise psd-table  --hurst 0.3 --k inf --points 64 --format csv

The upper Hurst bound H+ sets the pilot block size. With the default bounds
(0.05, 0.95) the pilot needs n >= 1.8e5 or so; narrow them for shorter series,
as in the estimate line above.

Reports go to --out (or standard output), diagnostics to standard error.
Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical failure.
"""

import argparse
import dataclasses
import logging
import math
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from hurstnoise import __version__
from hurstnoise.asymptotics import (
    fast_regime_report,
    fisher_information,
    gamma_star,
    lower_bounds,
    variance_optimal_regime,
)
from hurstnoise.config import COMMANDS, RunConfig, parse_block_size, parse_pair
from hurstnoise.errors import EXIT_CONFIG, EXIT_OK, ParameterError, exit_code_for
from hurstnoise.estimators import estimate
from hurstnoise.io import (
    read_series_csv,
    sidecar_path,
    write_json,
    write_series_csv,
    write_table_csv,
)
from hurstnoise.montecarlo import REGIMES, REPLICATE_COLUMNS, run_study
from hurstnoise.seeding import draw_seed
from hurstnoise.spectral import INFINITY, SpectralModel, psd_table
from hurstnoise.synthesis import simulate_observations

__all__ = [
    "main",
    "build_parser",
    "cmd_simulate",
    "cmd_estimate",
    "cmd_mc_study",
    "cmd_variance",
    "cmd_psd_table",
]

logger = logging.getLogger("hurstnoise.cli")

FIT_COLUMNS = ("stage", "k", "h", "sigma", "nu", "contrast", "converged", "sd_h", "sd_sigma")


def _provenance(cfg: RunConfig) -> dict:
    return {"config": cfg.to_dict(), "version": __version__}


def _with_seed(cfg: RunConfig) -> RunConfig:
    if cfg.seed is not None:
        return cfg
    seed = draw_seed()
    logger.info("no --seed given; drew %d", seed)
    return dataclasses.replace(cfg, seed=seed)


# =============================================================================
# Commands
# =============================================================================


def cmd_simulate(cfg: RunConfig) -> int:
    """Write a simulated series CSV and its metadata sidecar."""
    cfg.require("out")
    cfg = _with_seed(cfg)
    series = simulate_observations(cfg.model_params(), cfg.seed)
    write_series_csv(cfg.out, series, _provenance(cfg))
    return EXIT_OK


def _noise_level(cfg: RunConfig, sidecar_tau: float | None) -> float:
    if cfg.tau is not None:
        return cfg.tau
    if sidecar_tau is not None:
        logger.info("tau=%g taken from the series metadata", sidecar_tau)
        return sidecar_tau
    logger.warning("no --tau given and no series metadata; assuming tau = 0")
    return 0.0


def cmd_estimate(cfg: RunConfig) -> int:
    """Estimate (H, sigma) from a series CSV."""
    cfg.require("input")
    z = read_series_csv(cfg.input)
    tau = _noise_level(cfg, z.params.tau if z.params is not None else None)
    cfg = dataclasses.replace(cfg, tau=tau)
    report = estimate(z, cfg.pilot_config(), cfg.two_step_config(), pilot_only=cfg.pilot_only)

    if cfg.format == "json":
        write_json({**report.to_dict(), **_provenance(cfg)}, cfg.out)
        return EXIT_OK
    rows = []
    for stage, fit in (("pilot", report.pilot), ("optimal", report.optimal)):
        if fit is None:
            continue
        final = fit is report.final
        rows.append(
            (
                stage,
                fit.k,
                fit.h_hat,
                fit.sigma_hat,
                fit.nu_hat,
                fit.contrast,
                fit.converged,
                report.asymptotic_sd_h if final else None,
                report.asymptotic_sd_sigma if final else None,
            )
        )
    write_table_csv(FIT_COLUMNS, rows, cfg.out)
    return EXIT_OK


def cmd_mc_study(cfg: RunConfig) -> int:
    """Run a Monte Carlo study.

    With --out, replicates go to the CSV and the summary to its `.json`
    sidecar. Otherwise standard output receives the summary (json) or the
    replicate table (csv).
    """
    cfg = _with_seed(cfg)
    study = run_study(cfg.mc_config(cfg.seed), workers=cfg.workers)
    rows = [row.as_tuple() for row in study.rows]
    summary = {**study.to_dict(), **_provenance(cfg)}
    if cfg.out is not None:
        write_table_csv(REPLICATE_COLUMNS, rows, cfg.out)
        write_json(summary, sidecar_path(cfg.out))
    elif cfg.format == "csv":
        write_table_csv(REPLICATE_COLUMNS, rows)
    else:
        write_json(summary)
    return EXIT_OK


def _variance_block(cfg: RunConfig) -> float:
    if cfg.k is not None:
        return cfg.k
    return 1 if cfg.regime == "fast" else INFINITY


def cmd_variance(cfg: RunConfig) -> int:
    """Tabulate the limit variances at (H0, sigma0) for the chosen regime."""
    cfg.require("hurst")
    h0, sigma0 = cfg.hurst, cfg.sigma
    payload: dict = {"regime": cfg.regime, "hurst": h0, "sigma": sigma0}
    if cfg.regime == "optimal":
        tau = cfg.tau or 0.0
        g_star = gamma_star(cfg.delta_star, h0)
        report = variance_optimal_regime(h0, sigma0, tau, g_star)
        payload.update(tau=tau, k="inf")
    else:
        block = _variance_block(cfg)
        density = SpectralModel(h0, block)
        report = fast_regime_report(h0, sigma0, density)
        v_h, v_sigma = lower_bounds(h0, sigma0, density)
        info = fisher_information(h0, sigma0, density)
        payload.update(
            k="inf" if math.isinf(block) else int(block),
            lower_bounds={"h": v_h, "sigma": v_sigma},
            fisher_information=info.matrix.tolist(),
        )
    payload["report"] = report.to_dict()

    if cfg.format == "json":
        write_json({**payload, **_provenance(cfg)}, cfg.out)
        return EXIT_OK
    columns = ("regime", "hurst", "sigma", "k", *report.to_dict())
    write_table_csv(columns, [(cfg.regime, h0, sigma0, payload["k"], *report.to_dict().values())], cfg.out)
    return EXIT_OK


def cmd_psd_table(cfg: RunConfig) -> int:
    """Tabulate f_{H,k} and its H-derivative on lambda_j = pi j / points."""
    cfg.require("hurst")
    block = cfg.k if cfg.k is not None else INFINITY
    lam, f, df = psd_table(cfg.hurst, block, points=cfg.points)
    if cfg.format == "csv":
        write_table_csv(("lambda", "f", "df_dH"), zip(lam, f, df, strict=True), cfg.out)
        return EXIT_OK
    payload = {"lambda": lam.tolist(), "f": f.tolist(), "df_dH": df.tolist()}
    write_json({**payload, **_provenance(cfg)}, cfg.out)
    return EXIT_OK


COMMAND_HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "mc-study": cmd_mc_study,
    "variance": cmd_variance,
    "psd-table": cmd_psd_table,
}


# =============================================================================
# Argument parsing
# =============================================================================


def _pair(text: str) -> tuple[float, float]:
    try:
        return parse_pair(text)
    except ParameterError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _block(text: str) -> float:
    try:
        return parse_block_size(text)
    except ParameterError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _common_options() -> argparse.ArgumentParser:
    # defaults stay None so that only explicit flags override the config file
    common = argparse.ArgumentParser(add_help=False)
    model = common.add_argument_group("model")
    model.add_argument("--n", type=int, help="number of sampling intervals")
    model.add_argument("--hurst", type=float, help="Hurst index H in (0, 1)")
    model.add_argument("--sigma", type=float, help="scale of the fBm (default 1)")
    model.add_argument("--tau", type=float, help="noise level (default 0, or the series metadata)")
    model.add_argument("--seed", type=int, help="master seed (drawn and recorded if omitted)")

    est = common.add_argument_group("estimator")
    est.add_argument(
        "--h-bounds",
        type=_pair,
        metavar="LO,HI",
        help="admissible Hurst interval (default 0.05,0.95); H+ sets the pilot block size "
        "and 0.95 needs n >= 1.8e5 or so, use e.g. 0.05,0.5 at n = 65536",
    )
    est.add_argument("--sigma-bounds", type=_pair, metavar="LO,HI", help="admissible scale interval")
    est.add_argument("--delta-star", type=float, help="limit of log(n) q(n) (default ln 2)")
    est.add_argument("--grid-m", type=int, help="grid resolution m of the two-step estimator")
    est.add_argument("--pilot-only", action="store_const", const=True, help="skip the two-step stage")
    est.add_argument("--k", type=_block, help="force the block size (integer, or inf for tables)")

    run = common.add_argument_group("run")
    run.add_argument("--replicates", type=int, help="Monte Carlo replicates (default 200)")
    run.add_argument("--regime", choices=REGIMES, help="fast, pilot or optimal (default optimal)")
    run.add_argument("--workers", type=int, help="worker processes for mc-study (default 1)")
    run.add_argument("--points", type=int, help="frequencies in psd-table (default 256)")
    run.add_argument("--out", help="output path (default standard output)")
    run.add_argument("--format", choices=("csv", "json"), help="report format (default json)")
    run.add_argument("--config", type=Path, help="key-value config file; flags win")
    run.add_argument("-v", "--verbose", action="count", default=0, help="more logging (-vv for debug)")
    run.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hurstnoise",
        description="Estimate the Hurst index and scale of fBm observed under additive noise.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_options()
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "simulate": "simulate a noisy fBm series into --out",
        "estimate": "estimate (H, sigma) from a series CSV",
        "mc-study": "Monte Carlo study against the limit laws",
        "variance": "limit variances, lower bounds and Fisher information",
        "psd-table": "tabulate a pre-averaged spectral density",
    }
    for name in COMMANDS:
        command = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "estimate":
            command.add_argument("input", help="series CSV (header z, one value per line)")
    return parser


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.WARNING
    elif verbose >= 2:
        level = logging.DEBUG
    else:
        level = logging.INFO if verbose == 1 else logging.WARNING
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


_NOT_FIELDS = ("config", "verbose", "quiet")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK

    _configure_logging(args.verbose, args.quiet)
    flags = {key: value for key, value in vars(args).items() if key not in _NOT_FIELDS}
    try:
        cfg = RunConfig.from_sources(args.config, **flags)
        logger.debug("resolved config: %s", cfg.to_dict())
        return COMMAND_HANDLERS[cfg.command](cfg)
    except Exception as e:
        code = exit_code_for(e)
        if code == 1:
            logger.exception("unexpected failure")
        else:
            logger.error("%s", e)
        return code


if __name__ == "__main__":
    sys.exit(main())
