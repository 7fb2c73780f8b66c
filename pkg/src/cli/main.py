import argparse
import sys
from typing import List, Optional

from loguru import logger

from src import __version__
from src.app.lab import GCFLab
from src.cli.config import COMMANDS, load_config
from src.common.errors import ConfigError, LabError, PipelineError
from src.settings import initialize_logging, output_override

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_PIPELINE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcf-lab",
        description="Numerical lab for anisotropic Gauss curvature flow "
        "and the Lp Minkowski problem",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in (*COMMANDS, "sweep"):
        sub = commands.add_parser(name)
        sub.add_argument("--config", help="flat key = value config file")
        sub.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config key (repeatable)",
        )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        initialize_logging()
    except EnvironmentError as e:
        print(f"gcf-lab: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        config = load_config(
            args.config, args.overrides, out=output_override()
        )
        lab = GCFLab()
        if args.command == "sweep":
            frame = lab.sweep(config)
            passed = bool((frame["verdict"] == "pass").all())
        else:
            passed = lab.run(config, args.command).passed
    except ConfigError as e:
        logger.error(f"❌ configuration error: {e}")
        return EXIT_CONFIG
    except PipelineError as e:
        logger.error(f"❌ {e}")
        return EXIT_PIPELINE
    except LabError as e:
        logger.error(f"❌ {args.command} failed: {e}")
        return EXIT_PIPELINE
    return EXIT_PASS if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
