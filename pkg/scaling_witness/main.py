import sys
from argparse import ArgumentParser
from collections.abc import Sequence
from logging import CRITICAL, DEBUG, INFO, WARNING, basicConfig, getLogger
from typing import NoReturn

from pydantic import ValidationError

from scaling_witness import __version__, commands
from scaling_witness.business.exceptions import NumericalFailureError, WitnessError
from scaling_witness.integrations.files.exceptions import DocumentError
from scaling_witness.utils.constants import LOG_FORMAT, WITNESS_TOLERANCE, ExitCode

# NOTE: Mute noisy third-party loggers
for module in ("numpy", "scipy", "matplotlib"):
    getLogger(module).setLevel(CRITICAL)

basicConfig(level=INFO, format=LOG_FORMAT)

logger = getLogger(__name__)


class CommandLineError(Exception):
    """Raised instead of exiting when the command line cannot be parsed."""


class WitnessArgumentParser(ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise CommandLineError(message)


def build_parser() -> WitnessArgumentParser:
    parser = WitnessArgumentParser(
        prog="scaling-witness",
        description="Witness entanglement of multimode Gaussian states by partial scaling of momenta",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--tol", type=float, default=WITNESS_TOLERANCE, help="values below -tol count as negative")

    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log debug details")
    verbosity.add_argument("--quiet", action="store_true", help="only log warnings and errors")

    subparsers = parser.add_subparsers(dest="command", required=True)
    commands.state.register(subparsers)
    commands.search.register(subparsers)
    return parser


def run_cli(argv: Sequence[str]) -> int:
    """
    Run one sub-command and map its outcome to an exit code.

    Args:
        argv (Sequence[str]): The arguments, without the program name

    Returns:
        int: 0 without witness, 3 with a witness, 1 on input errors and 2 on numerical failures

    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CommandLineError as error:
        logger.error(f"Invalid command line: {error}")
        return ExitCode.INPUT_ERROR
    except SystemExit as exit_:
        return ExitCode.OK if exit_.code in {None, 0} else ExitCode.INPUT_ERROR

    getLogger().setLevel(DEBUG if args.verbose else WARNING if args.quiet else INFO)
    if args.tol < 0:
        logger.error(f"Tolerance must be non-negative, got {args.tol}")
        return ExitCode.INPUT_ERROR

    try:
        return args.handler(args)

    except NumericalFailureError as error:
        logger.error(f"Numerical failure: {error}")
        return ExitCode.NUMERICAL_FAILURE

    except (DocumentError, WitnessError, ValidationError) as error:
        logger.error(f"{error.__class__.__name__}: {error}")
        return ExitCode.INPUT_ERROR

    except OSError as error:
        logger.error(f"Cannot access {error.filename}: {error.strerror}")
        return ExitCode.INPUT_ERROR

    except ValueError as error:
        logger.error(f"Invalid input: {error}")
        return ExitCode.INPUT_ERROR


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
