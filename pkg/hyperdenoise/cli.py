# hyperdenoise
# Copyright 2025 Denys Karmazeniuk
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Command-line front end.

    hyperdenoise denoise --input noisy.pgm --output clean.pgm --method h
    hyperdenoise simulate --image builtin:composite --snr 2,4,8 --methods c,r,h --reps 20
    hyperdenoise risk --method h --profile fig2b --grid 0:8:0.5 --lambda universal:65536
    hyperdenoise noise-stats --family riesz --n 256 --reps 4

Defaults for --threads, --seed and --log-level come from HYPERDENOISE_THREADS, HYPERDENOISE_SEED and
HYPERDENOISE_LOG_LEVEL, read from the environment or a .env file. Every run echoes its resolved configuration
as JSON on standard error.
"""

import argparse
import asyncio
import json
import logging
import os
import sys

from dotenv import load_dotenv

from hyperdenoise import __version__
from hyperdenoise.core.codecs import format_for_path, save_text
from hyperdenoise.core.helpers import parse_float_list, parse_grid, rows_to_csv
from hyperdenoise.exceptions import EXIT_BAD_ARGUMENTS, HyperDenoiseError, InvalidArgumentError, exit_code_for
from hyperdenoise.hyperdenoiseclient import AsyncHyperDenoiseClient
from hyperdenoise.numerics.noise_stats import MOMENT_COLUMNS
from hyperdenoise.numerics.risk import RISK_COLUMNS, parse_lambda
from hyperdenoise.types import (
    AUTO,
    DEFAULT_LEVELS,
    DEFAULT_PEAK,
    DEFAULT_SPINS,
    UNIVERSAL,
    DenoiseConfig,
    ExperimentConfig,
    Family,
    Method,
    RiskMethod,
    RiskProfile,
    WaveletName,
    as_family,
    as_method,
)

logger = logging.getLogger(__name__)

ENV_THREADS = "HYPERDENOISE_THREADS"
ENV_SEED = "HYPERDENOISE_SEED"
ENV_LOG_LEVEL = "HYPERDENOISE_LOG_LEVEL"

_METHODS = [m.value for m in Method]
_RISK_METHODS = [m.value for m in RiskMethod]
_PROFILES = [p.value for p in RiskProfile]
_WAVELETS = [w.value for w in WaveletName]
_FAMILIES = ["riesz", "hct"]


def _env_int(name: str, default: int | None) -> int | None:
    value = os.getenv(name)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise InvalidArgumentError(f"{name} must be an integer, got: {value!r}") from None


def _sigma_arg(text: str) -> float | str:
    if text == AUTO:
        return AUTO
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}") from None


def _lambda_sq_arg(text: str) -> float | str:
    """The denoiser takes lambda as 'universal' or a number; the number is lambda, squared here."""
    if text == UNIVERSAL:
        return UNIVERSAL
    try:
        lam = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'universal' or a number, got {text!r}") from None
    if lam < 0:
        raise argparse.ArgumentTypeError(f"lambda must be non-negative, got {lam}")
    return lam**2


def _add_pipeline_flags(parser: argparse.ArgumentParser, seed: int):
    parser.add_argument("--wavelet", choices=_WAVELETS, default=WaveletName.LA8.value, help="filter bank")
    parser.add_argument("--levels", type=int, default=DEFAULT_LEVELS, help="decomposition depth J")
    parser.add_argument("--spins", type=int, default=DEFAULT_SPINS, help="cycle-spin grid size S (S x S shifts)")
    parser.add_argument(
        "--lambda",
        dest="lambda_sq",
        type=_lambda_sq_arg,
        default=UNIVERSAL,
        help="threshold in noise units, or 'universal'",
    )
    parser.add_argument("--seed", type=int, default=seed, help=f"base seed (env {ENV_SEED})")


def build_parser() -> argparse.ArgumentParser:
    threads = _env_int(ENV_THREADS, None)
    seed = _env_int(ENV_SEED, 0)
    parser = argparse.ArgumentParser(prog="hyperdenoise", description="Hyperanalytic wavelet denoising")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--threads", type=int, default=threads, help=f"worker threads, defaults to all cores (env {ENV_THREADS})"
    )
    parser.add_argument(
        "--log-level",
        default=os.getenv(ENV_LOG_LEVEL, "WARNING"),
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        help=f"logging level on standard error (env {ENV_LOG_LEVEL})",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    denoise = commands.add_parser("denoise", help="denoise an image file")
    denoise.add_argument("--input", required=True, help="noisy PGM or HYPD image, or builtin:NAME?key=val")
    denoise.add_argument("--output", required=True, help="output path; written in the input's format")
    denoise.add_argument("--method", choices=_METHODS, default=Method.HYPERCOMPLEX.value, help="thresholding method")
    denoise.add_argument("--sigma", type=_sigma_arg, default=AUTO, help="noise level, or 'auto' to estimate it")
    _add_pipeline_flags(denoise, seed)

    simulate = commands.add_parser("simulate", help="run a repeated denoising experiment and write a CSV")
    simulate.add_argument("--image", required=True, help="clean PGM or HYPD image, or builtin:NAME?key=val")
    simulate.add_argument("--snr", type=parse_float_list, default=[2.0, 4.0, 8.0], help="comma separated SNRs")
    simulate.add_argument("--methods", default="c,r,h", help="comma separated methods out of c, a, r, h")
    simulate.add_argument("--reps", type=int, default=1, help="replicates per SNR")
    simulate.add_argument("--sigma", type=float, default=None, help="explicit noise level instead of --snr")
    simulate.add_argument("--peak", type=float, default=DEFAULT_PEAK, help="PSNR peak value")
    simulate.add_argument("--output", default=None, help="CSV path; standard output when omitted")
    _add_pipeline_flags(simulate, seed)

    risk = commands.add_parser("risk", help="tabulate the risk of one thresholded coefficient")
    risk.add_argument("--method", choices=_RISK_METHODS, required=True, help="c, a, r1, r2 or h")
    risk.add_argument("--profile", choices=_PROFILES, default=RiskProfile.EQUAL_MEANS.value, help="mean profile")
    risk.add_argument("--theta", type=parse_float_list, default=None, help="comma separated |theta| values")
    risk.add_argument("--grid", type=parse_grid, default=None, help="|theta| grid, start:stop:step or a list")
    risk.add_argument("--lambda", dest="lam", default="universal:65536", help="universal:K or a number")
    risk.add_argument("--direction", type=parse_float_list, default=None, help="unit direction for --profile custom")
    risk.add_argument("--variance-split", type=float, default=None, help="first Riesz variance for r2")
    risk.add_argument("--mc", type=int, default=0, help="Monte Carlo draws per point (0 disables)")
    risk.add_argument("--seed", type=int, default=seed, help=f"base seed (env {ENV_SEED})")
    risk.add_argument("--output", default=None, help="CSV path; standard output when omitted")

    stats = commands.add_parser("noise-stats", help="empirical moments of pure-noise coefficients")
    stats.add_argument("--family", choices=_FAMILIES, required=True, help="quadrature family")
    stats.add_argument("--n", type=int, default=256, help="image side")
    stats.add_argument("--reps", type=int, default=4, help="replicates")
    stats.add_argument("--wavelet", choices=_WAVELETS, default=WaveletName.LA8.value, help="filter bank")
    stats.add_argument("--levels", type=int, default=DEFAULT_LEVELS, help="decomposition depth J")
    stats.add_argument("--sigma", type=float, default=1.0, help="noise level of the draws")
    stats.add_argument("--seed", type=int, default=seed, help=f"base seed (env {ENV_SEED})")
    stats.add_argument("--output", default=None, help="CSV path; standard output when omitted")
    return parser


def echo_config(args: argparse.Namespace):
    config = dict(vars(args))
    config["version"] = __version__
    print(json.dumps(config, sort_keys=True, default=str), file=sys.stderr)


async def emit_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        await save_text(path, text)


async def cmd_denoise(client: AsyncHyperDenoiseClient, args: argparse.Namespace):
    cfg = DenoiseConfig(
        method=args.method,
        wavelet=args.wavelet,
        levels=args.levels,
        sigma=args.sigma,
        lambda_sq=args.lambda_sq,
        spins=args.spins,
        seed=args.seed,
    )
    image, fmt = await client.images.load(args.input)
    report = await client.denoise.denoise(image, cfg)
    await client.images.save(args.output, report.image, fmt or format_for_path(args.output))
    print(f"sigma={report.sigma!r} lambda_sq={report.lambda_sq!r} kept_fraction={report.kept_fraction!r}")


async def cmd_simulate(client: AsyncHyperDenoiseClient, args: argparse.Namespace):
    cfg = ExperimentConfig(
        image=args.image,
        snrs=tuple(args.snr),
        methods=tuple(as_method(m) for m in parse_methods(args.methods)),
        reps=args.reps,
        seed=args.seed,
        wavelet=args.wavelet,
        levels=args.levels,
        spins=args.spins,
        sigma=args.sigma,
        lambda_sq=args.lambda_sq,
        peak=args.peak,
    )
    table = await client.bench.run_experiment(cfg)
    await emit_text(args.output, table.to_csv())


def parse_methods(text: str) -> list[str]:
    methods = [item.strip() for item in text.split(",") if item.strip()]
    if not methods:
        raise InvalidArgumentError("--methods needs at least one method")
    return methods


async def cmd_risk(client: AsyncHyperDenoiseClient, args: argparse.Namespace):
    grid = args.grid if args.grid is not None else (args.theta if args.theta is not None else [0.0])
    lam = parse_lambda(args.lam, args.method)
    direction = tuple(args.direction) if args.direction is not None else None
    points = await client.risk.risk_curve(
        args.method,
        args.profile,
        lam,
        grid,
        direction=direction,
        variance_split=args.variance_split,
        mc=args.mc,
        seed=args.seed,
    )
    await emit_text(args.output, rows_to_csv(RISK_COLUMNS, (point.row() for point in points)))


async def cmd_noise_stats(client: AsyncHyperDenoiseClient, args: argparse.Namespace):
    family: Family = as_family(args.family)
    report = await client.noise_stats.moments(
        family, args.n, args.reps, args.seed, wavelet=args.wavelet, levels=args.levels, sigma=args.sigma
    )
    await emit_text(args.output, rows_to_csv(MOMENT_COLUMNS, report.rows()))


COMMANDS = {
    "denoise": cmd_denoise,
    "simulate": cmd_simulate,
    "risk": cmd_risk,
    "noise-stats": cmd_noise_stats,
}


async def run(args: argparse.Namespace):
    logger.info("running %s", args.command)
    async with AsyncHyperDenoiseClient(max_workers=args.threads) as client:
        await COMMANDS[args.command](client, args)


def main(argv: list[str] | None = None) -> int:
    """
    Entry point of the ``hyperdenoise`` console script.

    Returns:
        int: 0 on success, 2 for bad arguments, 3 for I/O failures and 4 for numeric failures. A failed run
        leaves no partial output file behind.
    """
    load_dotenv()
    try:
        parser = build_parser()
    except HyperDenoiseError as error:
        print(f"hyperdenoise: {error}", file=sys.stderr)
        return EXIT_BAD_ARGUMENTS
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return int(exit_request.code or 0)
    except HyperDenoiseError as error:
        print(f"hyperdenoise: {error}", file=sys.stderr)
        return EXIT_BAD_ARGUMENTS
    logging.basicConfig(
        level=getattr(logging, args.log_level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    echo_config(args)
    try:
        asyncio.run(run(args))
    except HyperDenoiseError as error:
        print(f"hyperdenoise: {error}", file=sys.stderr)
        return exit_code_for(error)
    return 0


if __name__ == "__main__":
    sys.exit(main())
