# Command-line entry point
import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from grandab import __version__
from grandab.cli import decode, simulate, table, trace
from grandab.config.settings import settings
from grandab.utils.errors import ConfigurationError, GrandabError
from grandab.utils.logger import setup_logger

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_CONFIG = 2


def create_parser() -> argparse.ArgumentParser:
    """
    Create the argument parser with every sub-command registered

    Returns:
        Configured ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog="grandab",
        description="GRANDAB hard-decision decoding with a cycle-accurate dial architecture model",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Root log level")
    parser.add_argument("--debug", action="store_true", default=settings.DEBUG)

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (simulate, decode, trace, table):
        command.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the sub-command and map failures to exit codes"""
    parser = create_parser()
    args = parser.parse_args(argv)
    setup_logger(args.log_level, debug=args.debug)

    try:
        return args.func(args)
    except (ConfigurationError, ValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except GrandabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
