from typing import Optional
from dotenv import load_dotenv
from loguru import logger
import os

from src.common.log import configure_logging

load_dotenv()
# extract env variables for run output and logging
GCF_LAB_OUT = os.getenv("GCF_LAB_OUT")
GCF_LAB_LOG_LEVEL = os.getenv("GCF_LAB_LOG_LEVEL", "INFO").upper()
GCF_LAB_LOG_FILE = os.getenv("GCF_LAB_LOG_FILE")
GCF_LAB_WORKERS = os.getenv("GCF_LAB_WORKERS", "1")

_LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR")


def _check_env() -> None:
    """Fail fast if environment variables hold values we cannot use."""
    problems = []
    if GCF_LAB_LOG_LEVEL not in _LOG_LEVELS:
        problems.append(
            f"GCF_LAB_LOG_LEVEL={GCF_LAB_LOG_LEVEL!r} (expected one of "
            f"{', '.join(_LOG_LEVELS)})"
        )
    if not GCF_LAB_WORKERS.isdigit() or int(GCF_LAB_WORKERS) < 1:
        problems.append(
            f"GCF_LAB_WORKERS={GCF_LAB_WORKERS!r} (expected a positive integer)"
        )
    if problems:
        raise EnvironmentError(
            f"Invalid environment variables: {'; '.join(problems)}. "
            "Fix them in .env or the shell."
        )


def output_override() -> Optional[str]:
    """Output directory forced by the environment, if any."""
    return os.getenv("GCF_LAB_OUT", GCF_LAB_OUT) or None


def default_workers() -> int:
    return int(GCF_LAB_WORKERS)


def initialize_logging() -> None:
    """
    Configure loguru from the environment.
    Called once by the command line entry point.
    """
    _check_env()
    configure_logging(GCF_LAB_LOG_LEVEL, GCF_LAB_LOG_FILE)
    logger.debug("🚀 Logging initialised at level {}", GCF_LAB_LOG_LEVEL)
