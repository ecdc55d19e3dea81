"""Command-line entry point.

Assembles the ``surfrig`` command from the subcommand modules and maps
input errors to exit code 2.
"""

import argparse
import logging
import sys

from surfrig import __version__
from surfrig.commands import graph_commands, surface_commands
from surfrig.commands.common import EXIT_INPUT, summary
from surfrig.config import Settings, get_settings

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surfrig",
        description=(
            "Decide (2,k)-sparsity, reduce tight graphs to their base "
            "graph, and test rigidity of frameworks on algebraic surfaces."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    parser.add_argument(
        "--log-level",
        help="Logging level on stderr (default from SURFRIG_LOG_LEVEL)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    graph_commands.register(subparsers)
    surface_commands.register(subparsers)
    return parser


def _configure_logging(level: str) -> None:
    root = logging.getLogger("surfrig")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        logging.Formatter("%(levelname)s %(name)s: %(message)s")
    )
    root.addHandler(handler)
    root.setLevel(level)


def _settings_for(args: argparse.Namespace) -> Settings:
    settings = get_settings()
    if args.log_level:
        settings = settings.model_copy(
            update={"log_level": args.log_level.upper()}
        )
    return settings


def main(argv: list[str] | None = None) -> int:
    """Run one command.

    Returns:
        0 for an affirmative result, 1 for a negative verdict and 2 for
        usage or input errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else 0
    try:
        settings = _settings_for(args)
        _configure_logging(settings.log_level)
        logger.debug("Running %s", args.command)
        return args.handler(args, settings)
    except (ValueError, OSError) as e:
        summary(f"error: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
