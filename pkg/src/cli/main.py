import argparse
import sys

from pydantic import ValidationError

from src import __version__
from src.cli.commands import COMMANDS
from src.cli.schemas import RunConfig
from src.config import settings
import src.config.logging as log_config
from src.config.logging import cli_logger, set_level
from src.utils.errors import ExitCode, LatticeStatsError


def _float_list(text):
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="Output file ('-' for stdout)")
    common.add_argument("--format", choices=['csv', 'json'], help=f"Output format (default {settings.OUTPUT_FORMAT})")
    common.add_argument("--seed", type=int, help="Master seed (64-bit unsigned)")
    common.add_argument("--log-level", help="Log level (default LOG_LEVEL from the environment)")
    common.add_argument("--workers", type=int, help="Parallel workers for batch generation")
    common.add_argument("--backend", choices=['local', 'celery'], help="Batch generation backend")
    return common


def _scenario_options(parser):
    parser.add_argument("--case", choices=['diagonal', 'iid_uniform'], help="Translation scenario")
    parser.add_argument("--d", type=int, help="Dimension")
    parser.add_argument("--x0", type=float, help="Diagonal coordinate")
    parser.add_argument("--rho", help="'uniform' or a (knot, value) CSV file")
    parser.add_argument(
        "--law", choices=['theorem1', 'theorem2', 'shared'],
        help="Reference limit law (default theorem1 for diagonal, theorem2 for iid_uniform). "
             "For iid_uniform with d >= 2 theorem2 is only a product approximation and `cf` "
             "typically misses --tol 0.02; pass shared for the exact law"
    )


def _grid_options(parser):
    parser.add_argument("--u-min", type=float, help=f"CF grid start (default {settings.CF_GRID_MIN})")
    parser.add_argument("--u-max", type=float, help=f"CF grid end (default {settings.CF_GRID_MAX})")
    parser.add_argument("--u-step", type=float, help=f"CF grid step (default {settings.CF_GRID_STEP})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lattice-stats",
        description="Lattice point counts in dilated cubes and the limit laws of their error"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = _common_options()

    count = sub.add_parser("count", parents=[common], help="Count Z^d points in tC(a)+X")
    count.add_argument("--d", type=int, required=True, help="Dimension")
    count.add_argument("--a", type=float, default=1.0, help="Half side length")
    count.add_argument("--t", type=float, required=True, help="Dilation")
    count.add_argument("--x", type=_float_list, required=True, help="Translation, comma-separated")

    sample = sub.add_parser("sample", parents=[common], help="Draw a batch of Delta samples")
    _scenario_options(sample)
    sample.add_argument("--T", type=float, required=True, help="Horizon")
    sample.add_argument("--N", type=int, required=True, help="Sample count")

    cf = sub.add_parser("cf", parents=[common], help="Compare empirical and analytic CFs")
    _scenario_options(cf)
    _grid_options(cf)
    cf.add_argument("--T", type=float, required=True, help="Horizon")
    cf.add_argument("--N", type=int, required=True, help="Sample count")
    cf.add_argument("--tol", type=float, help=f"Sup-gap threshold (default {settings.CF_TOLERANCE})")

    law = sub.add_parser("law", parents=[common], help="Tabulate a limit law")
    _scenario_options(law)
    _grid_options(law)
    law.add_argument("--steps", type=int, help=f"Points per table (default {settings.LAW_TABLE_STEPS})")

    convergence = sub.add_parser("convergence", parents=[common], help="KS and CF distances over a T grid")
    _scenario_options(convergence)
    _grid_options(convergence)
    convergence.add_argument("--T-grid", type=_float_list, required=True, help="Horizons, comma-separated")
    convergence.add_argument("--N", type=int, required=True, help="Sample count per horizon")

    verify = sub.add_parser("verify", parents=[common], help="Run the oracle and invariant suites")
    verify.add_argument("--quick", action="store_true", help="Smaller suites")

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return int(e.code) if isinstance(e.code, int) else ExitCode.USAGE

    set_level(args.log_level or log_config.LOG_LEVEL)
    options = {k: v for k, v in vars(args).items() if v is not None}

    try:
        config = RunConfig(**options)
    except ValidationError as e:
        cli_logger.error(f"Invalid options for {args.subcommand}: {e}")
        print(f"{parser.prog} {args.subcommand}: error: {e}", file=sys.stderr)
        return ExitCode.USAGE

    try:
        return COMMANDS[config.subcommand](config)
    except LatticeStatsError as e:
        cli_logger.error(f"{config.subcommand} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        cli_logger.error(f"Invalid input for {config.subcommand}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.USAGE
    except OSError as e:
        cli_logger.error(f"I/O error in {config.subcommand}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.IO
    except Exception as e:
        # exit codes stay 0-3; a crash shares 1 but is reported as an internal error
        cli_logger.critical(f"Internal error in {config.subcommand}: {e!r}", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return ExitCode.FAILURE


if __name__ == "__main__":
    sys.exit(main())
