"""
Command-line entry point.
Usage: python -m taulab <charfn|metric|separate|validate|interpolate> [flags]

Exit codes: 0 success, 2 input or validation error, 3 enclosure failure,
4 invariant breach or internal error.
"""

import argparse
import sys
from collections.abc import Callable

import structlog

from taulab import __version__
from taulab.commands.charfn import cmd_charfn
from taulab.commands.common import (
    RunConfig,
    build_run_config,
    parse_bands,
    parse_float_list,
    parse_t_grid,
)
from taulab.commands.interpolate import cmd_interpolate
from taulab.commands.metric import cmd_metric
from taulab.commands.separate import cmd_separate
from taulab.commands.validate import cmd_validate
from taulab.utils.errors import InputValidationError, TaulabError
from taulab.utils.logger import configure_logging

logger = structlog.get_logger()

COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "charfn": cmd_charfn,
    "metric": cmd_metric,
    "separate": cmd_separate,
    "validate": cmd_validate,
    "interpolate": cmd_interpolate,
}

HELP = {
    "charfn": "characteristic function over a t-grid (product brackets or closed form)",
    "metric": "d_a at dyadic points with two-sided bounds, or d_a(t, 0) over a t-grid",
    "separate": "certified separation witness and null-dyadic searches for two sequences",
    "validate": "run the invariant suite",
    "interpolate": "mixture characteristic functions and decay profiles",
}

# Long descriptions shown by `taulab <command> --help`
DESCRIPTIONS = {
    "separate": (
        "Search m = m_min..m_max for the first dyadic point 2^m where one sequence is certified "
        "below --epsilon and the other above it. The search starts at --m-min (default 0), so "
        "for a_n = 4^{-n-1} against a = 1/8 at epsilon 0.1 it reports m = 1 "
        "(d_a(2, 0) ~ 0.0645); pass --m-min 2 to start at the m = 2 witness."
    ),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", default=[], help="measure or ParamSeq JSON")
    common.add_argument("--out", help="output path (stdout when omitted)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    grid = common.add_mutually_exclusive_group()
    grid.add_argument("--t-grid", help='t values as "start:stop:step"')
    grid.add_argument("--t-list", help="comma-separated t values")
    common.add_argument("--m-min", type=int, default=0, help="first dyadic exponent searched")
    common.add_argument("--m-max", type=int)
    common.add_argument("--trunc-N", dest="trunc_n", type=int, help="truncation index N")
    common.add_argument("--depth-D", dest="depth_d", type=int, help="sampling depth D")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=0, help="Monte Carlo sample count")
    common.add_argument("--epsilon", type=float)
    common.add_argument("--bound-n", type=int, default=4, help="window n of the two-sided bounds")
    common.add_argument("--weights", help="comma-separated mixture weights in [0, 1]")
    common.add_argument("--bands", help='frequency bands as "lo:hi,lo:hi"')
    common.add_argument("--inject-fault", help="run the named check against a faulty oracle")

    parser = argparse.ArgumentParser(prog="taulab", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"taulab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in HELP.items():
        description = DESCRIPTIONS.get(name, text)
        sub.add_parser(name, parents=[common], help=text, description=description)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    t_values = None
    if args.t_grid is not None:
        t_values = parse_t_grid(args.t_grid)
    elif args.t_list is not None:
        t_values = parse_float_list(args.t_list, "t-list")

    return build_run_config(
        command=args.command,
        inputs=args.input,
        out=args.out,
        format=args.format,
        t_values=t_values,
        m_min=args.m_min,
        m_max=args.m_max,
        trunc_n=args.trunc_n,
        depth_d=args.depth_d,
        seed=args.seed,
        samples=args.samples,
        epsilon=args.epsilon,
        bound_n=args.bound_n,
        weights=parse_float_list(args.weights, "weights") if args.weights else None,
        bands=parse_bands(args.bands) if args.bands else None,
        inject_fault=args.inject_fault,
    )


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = config_from_args(args)
        return COMMANDS[config.command](config)
    except TaulabError as e:
        level = logger.error if not isinstance(e, InputValidationError) else logger.warning
        level("Command failed", command=args.command, error=str(e), exit_code=e.exit_code)
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure", command=args.command, error=str(e))
        return 4


if __name__ == "__main__":
    sys.exit(main())
