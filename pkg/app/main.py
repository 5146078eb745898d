"""
engel-check command line entry point.

Verifies statements about left and right Engel elements on a corpus of
finite groups and in free nilpotent groups. stdout carries only report
text or JSON; logging goes to stderr.

Exit codes: 0 all checks pass, 1 at least one failure (or an
inconclusive symbolic verdict), 2 usage or input error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from app.commands import COMMAND_MODULES
from app.config import settings
from app.services.groups import GroupError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    elif settings.log_level:
        level = getattr(logging, settings.log_level.upper(), logging.INFO)
    else:
        level = logging.INFO if settings.environment == "production" else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Check Engel element statements on finite groups and free nilpotent groups",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    configure_logging(verbose=args.verbose, quiet=args.quiet)
    logger.debug(f"{settings.app_name} {settings.app_version}: {args.command} (environment={settings.environment})")
    try:
        return args.handler(args)
    except GroupError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
