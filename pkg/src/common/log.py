import sys
from typing import Optional

from loguru import logger


def configure_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """
    Replace loguru's default sink with a stderr sink at `level`, and
    optionally a rotating file sink.
    """
    logger.remove()
    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | "
        "{name}:{function} - <level>{message}</level>",
    )
    if log_file:
        logger.add(
            log_file, level=level, rotation="1 day", retention="7 days"
        )
