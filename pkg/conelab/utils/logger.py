"""Logging configuration for ConeLab."""

import os
import sys
from pathlib import Path

from loguru import logger

LOG_DIR = Path(os.environ.get("CONELAB_LOG_DIR", "/tmp/conelab_logs"))
CONSOLE_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"


def configure_logging(level: str = "INFO", log_dir: Path = LOG_DIR) -> None:
    """Install the console sink and the rotated debug file sink."""
    logger.remove()
    logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level)
    log_dir.mkdir(parents=True, exist_ok=True)
    logger.add(
        log_dir / "conelab_{time:YYYY-MM-DD}.log",
        rotation="1 day",
        retention="7 days",
        level="DEBUG",
    )


configure_logging()

__all__ = ["configure_logging", "logger"]
