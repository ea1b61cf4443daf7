"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from . import __version__
from .commands import analysis, detect, sweep, verify
from .config import RunConfig
from .services.artifacts import ArtifactError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"

HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "detect": detect.run,
    "sweep": sweep.run,
    "section": analysis.run_section,
    "lyapunov": analysis.run_lyapunov,
    "hist": analysis.run_hist,
    "orbit": analysis.run_orbit,
    "verify": verify.run,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ckam",
        description="Converse KAM detection of invariant tori in two-wave and Q-flow models",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for module in (detect, sweep, analysis, verify):
        module.register(subparsers)
    return parser


def _flag(field: str) -> str:
    return "--" + field.replace("_", "-")


def _describe(error: ValidationError) -> str:
    messages = []
    for item in error.errors():
        msg = item["msg"].replace("Value error, ", "")
        if item["loc"]:
            messages.append(f"{_flag(str(item['loc'][0]))}: {msg}")
        else:
            messages.append(msg)
    return "; ".join(messages)


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    """
    Parse command-line arguments into a fully resolved RunConfig.

    Flags override values from ``--config``, which override field defaults.
    Usage errors exit with status 2 and name the offending flag.
    """
    parser = build_parser()
    values = vars(parser.parse_args(argv))
    config_path = values.pop("config", None)

    if config_path is not None and not Path(config_path).is_file():
        parser.error(f"--config: no such file: {config_path}")

    try:
        return RunConfig(_env_file=config_path, **values)
    except ValidationError as e:
        parser.error(_describe(e))


def main(argv: Optional[List[str]] = None) -> int:
    cfg = parse_args(argv)
    logging.basicConfig(level=cfg.log_level, format=LOG_FORMAT)
    logger.debug("resolved configuration: %s", cfg.model_dump_json())

    try:
        return HANDLERS[cfg.command](cfg)
    except ArtifactError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
