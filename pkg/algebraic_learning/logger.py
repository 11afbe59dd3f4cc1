"""
Package loggers for algebraic_learning.

Log lines go to standard error. Standard output carries the JSON summaries,
boards and tables of the command line.
"""

import copy
import logging
import sys
from typing import Optional

from algebraic_learning.config import Config, EnvironmentVariables

PACKAGE_LOGGER_PREFIX = "algebraic_learning"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_package_level = logging.INFO


class ColorFormatter(logging.Formatter):
    """Colors the level name and the message of each line when `colored` is set."""

    GREY = "\033[90m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    RED = "\033[91m"
    BOLD_RED = "\033[1;91m"
    RESET = "\033[0m"

    LEVEL_COLORS = {
        logging.DEBUG: GREY,
        logging.INFO: GREEN,
        logging.WARNING: YELLOW,
        logging.ERROR: RED,
        logging.CRITICAL: BOLD_RED,
    }

    def __init__(
        self,
        fmt: str = LOG_FORMAT,
        datefmt: Optional[str] = DATE_FORMAT,
        colored: bool = True,
    ) -> None:
        super().__init__(fmt, datefmt=datefmt)
        self.colored = colored

    def formatMessage(self, record: logging.LogRecord) -> str:
        if not self.colored:
            return super().formatMessage(record)
        color = self.LEVEL_COLORS.get(record.levelno, self.RESET)
        # the record is shared with other handlers
        painted = copy.copy(record)
        painted.levelname = f"{color}{record.levelname}{self.RESET}"
        painted.message = f"{color}{record.message}{self.RESET}"
        return super().formatMessage(painted)


def get_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """
    Get the logger of a module, configured on first use.

    Args:
        name: Name of the logger, normally `__name__` of the calling module
        level: Logging level; defaults to the current package level

    Returns:
        Logger writing to standard error
    """
    logger = logging.getLogger(name)

    if not logger.handlers:
        if level is None:
            level = _package_level
        logger.setLevel(level)

        stream = sys.stderr
        handler = logging.StreamHandler(stream)
        handler.setLevel(level)
        handler.setFormatter(ColorFormatter(colored=stream.isatty()))
        logger.addHandler(handler)

        logger.propagate = False

    return logger


def set_log_level(logger: logging.Logger, level: int) -> None:
    """
    Set the logging level for a logger and all its handlers.

    Args:
        logger: Logger instance to configure
        level: Logging level (e.g., logging.DEBUG, logging.INFO)
    """
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)


def set_package_log_level(level: int) -> None:
    """Apply `level` to every package logger, including those created later."""
    global _package_level
    _package_level = level
    for name, candidate in logging.Logger.manager.loggerDict.items():
        if name.startswith(PACKAGE_LOGGER_PREFIX) and isinstance(
            candidate, logging.Logger
        ):
            set_log_level(candidate, level)


def package_log_level() -> int:
    return _package_level


def init_log_level() -> int:
    """Read ALGEBRA_LOG_LEVEL and apply it to the package loggers.

    Unknown level names fall back to INFO.
    """
    name = Config.get_variable(EnvironmentVariables.ALGEBRA_LOG_LEVEL, "INFO")
    level = logging.getLevelName(name.upper())
    if not isinstance(level, int):
        level = logging.INFO
    set_package_log_level(level)
    return level
