"""
cartier-lab CLI Entry Point

Runs the obstruction computations end-to-end, re-verifies every result and
writes a versioned report.

Usage:
    cartier-lab zp --p 3 --ns 0,1 --pairs 0:1 --places-deg 2 --precision 40
    cartier-lab wound --p 3 --n 1 --k 2 --places t,1/t,t+1,t^2+1
    cartier-lab points --p 3 --place t --xs 1,t
    cartier-lab cert --p 3 --pairs 0:1,1:2 --pmax 50 --lmax 50
    cartier-lab selftest --seed 7 --only cartier

Exit codes: 0 verified report, 1 computation or verification failure,
2 invalid parameters.
"""

import argparse
import logging
import sys
from typing import Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from cartier_lab.commands import COMMANDS
from cartier_lab.config import Settings, configure_logging, get_logger
from cartier_lab.errors import CartierLabError
from cartier_lab.report import SELFTEST_MODULES, Report, RunConfig, write_report
from cartier_lab.selftest import cmd_selftest
from cartier_lab.tui import create_console, print_error, print_report

# Load environment variables (.env values do not override the shell)
load_dotenv()

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _pair_list(text: str) -> list[tuple[int, int]]:
    pairs = []
    for part in text.split(","):
        if not part.strip():
            continue
        left, sep, right = part.partition(":")
        try:
            if not sep:
                raise ValueError
            pairs.append((int(left), int(right)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected pairs N:K separated by commas, got '{part}'")
    return pairs


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _common_parser(settings: Settings) -> argparse.ArgumentParser:
    """Flags shared by every command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="Characteristic, an odd prime (default: 3)")
    common.add_argument("--m", type=int, default=1, help="Degree of the constant field F_{p^m} (default: 1)")
    common.add_argument(
        "--precision",
        type=int,
        default=settings.precision,
        help=f"Truncation order M of local computations (default: {settings.precision})",
    )
    common.add_argument(
        "--format",
        dest="output_format",
        choices=["json", "csv", "text"],
        default=settings.output_format,
        help=f"Report format (default: {settings.output_format})",
    )
    common.add_argument("--out", type=str, default=None, help="Write the report to this file (UTF-8)")
    common.add_argument("--seed", type=int, default=settings.seed, help="Seed for randomized draws")
    common.add_argument(
        "--workers",
        type=int,
        default=settings.workers,
        help="Threads for per-place sweeps (output order does not depend on it)",
    )
    common.add_argument("--dev", action="store_true", help="Development mode with debug logging")
    return common


def build_parser(settings: Optional[Settings] = None) -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per computation."""
    settings = settings or Settings.from_env()
    common = _common_parser(settings)

    parser = argparse.ArgumentParser(
        prog="cartier-lab",
        description="Cartier operator and local-global obstructions over F_p(t)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    cartier-lab zp --p 3 --ns 0 --places t
    cartier-lab wound --p 3 --n 1 --places 1/t
    cartier-lab points --global-search 3
        """,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    zp = subparsers.add_parser("zp", parents=[common], help="Z/p family: class tables, searches, certificates")
    zp.add_argument("--ns", type=_int_list, default=[], help="Family indices N, e.g. 0,1")
    zp.add_argument("--pairs", type=_pair_list, default=[], help="Pairs N:K for x_N - x_K, e.g. 0:1,1:2")
    zp.add_argument("--places", type=_str_list, default=[], help="Places, e.g. t,t+1,1/t")
    zp.add_argument("--places-deg", type=int, default=None, help="Every place of degree <= d, plus 1/t")
    zp.add_argument(
        "--degree", dest="search_degree", type=int, default=4, help="Height bound D of the global search"
    )
    zp.add_argument("--pmax", type=int, default=50, help="Largest period refuted (default: 50)")
    zp.add_argument("--lmax", type=int, default=50, help="Largest preperiod refuted (default: 50)")

    wound = subparsers.add_parser("wound", parents=[common], help="Wound family t x^p = y^p - y")
    wound.add_argument("--n", type=int, default=None, help="Family index N > 0")
    wound.add_argument("--k", type=int, default=None, help="Second index K > N; solves x_N - x_K at t")
    wound.add_argument("--places", type=_str_list, default=[], help="Places, e.g. t,1/t,t^2+1")
    wound.add_argument("--places-deg", type=int, default=None, help="Every place of degree <= d, plus 1/t")

    points = subparsers.add_parser("points", parents=[common], help="Points on t x^p = y^p - y")
    points.add_argument("--place", type=str, default=None, help="Place to lift at")
    points.add_argument("--xs", type=_str_list, default=[], help="Rational functions x, e.g. 1,t,1+t")
    points.add_argument(
        "--global-search", type=int, default=None, help="Enumerate global points of height <= D"
    )

    cert = subparsers.add_parser("cert", parents=[common], help="Nonperiodicity certificates")
    cert.add_argument("--pairs", type=_pair_list, default=[], help="Pairs N:K, e.g. 0:1")
    cert.add_argument("--pmax", type=int, default=50, help="Largest period refuted (default: 50)")
    cert.add_argument("--lmax", type=int, default=50, help="Largest preperiod refuted (default: 50)")

    selftest = subparsers.add_parser("selftest", parents=[common], help="Run the invariant checks")
    selftest.add_argument("--only", choices=SELFTEST_MODULES, default=None, help="Run one module's checks")

    return parser


def _validation_message(error: ValidationError) -> str:
    """Collapse a pydantic error into one line."""
    parts = []
    for item in error.errors():
        location = ".".join(str(loc) for loc in item["loc"])
        message = item["msg"]
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Validate parsed arguments into a RunConfig."""
    values = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.model_fields and value is not None
    }
    return RunConfig(**values)


def run(config: RunConfig) -> Report:
    """Dispatch to the command implementation."""
    if config.command == "selftest":
        return cmd_selftest(config)
    return COMMANDS[config.command](config)


def emit(report: Report, config: RunConfig) -> None:
    """Write the report in the configured format to stdout or --out."""
    if config.output_format == "text":
        if config.out is None:
            print_report(report)
            return
        with open(config.out, "w", encoding="utf-8") as handle:
            print_report(report, create_console(file=handle))
        return

    text = write_report(report, config.output_format, config.out)
    if text is not None:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)

    # Setup logging based on dev mode or CARTIER_LOG_LEVEL
    if args.dev:
        configure_logging(level=logging.DEBUG, verbose=True)
    else:
        configure_logging()

    try:
        config = build_config(args)
    except ValidationError as e:
        print_error(_validation_message(e), error_type="UsageError")
        return EXIT_USAGE
    except CartierLabError as e:
        print_error(str(e), error_type="UsageError")
        return EXIT_USAGE

    try:
        report = run(config)
    except CartierLabError as e:
        print_error(str(e), error_type=type(e).__name__)
        if args.dev:
            logger.exception("Computation failed")
        return EXIT_FAILED

    emit(report, config)
    if not report.verified:
        logger.error("Report for %s did not verify", config.command)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
