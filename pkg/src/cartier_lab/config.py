"""
Configuration and Logging Setup

Provides centralized configuration and logging for cartier_lab.
Reads CARTIER_LOG_LEVEL and the other CARTIER_* defaults from environment
variables (a .env file is loaded by the CLI before this module is consulted).

Usage:
    from cartier_lab.config import configure_logging, get_logger, Settings

    # Configure at application startup
    configure_logging()

    # Get logger in any module
    logger = get_logger(__name__)

    # Defaults for command parameters
    settings = Settings.from_env()
"""

import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional, TextIO

# Default configuration
PACKAGE_LOGGER = "cartier_lab"
LOG_LEVEL_ENV = "CARTIER_LOG_LEVEL"
DEFAULT_LOG_LEVEL = "INFO"
LOG_FORMAT = "%(asctime)s %(levelname)-8s %(name)s: %(message)s"
LOG_FORMAT_SIMPLE = "cartier-lab %(levelname)s: %(message)s"

# Valid log levels
VALID_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}

VALID_FORMATS = ("json", "csv", "text")

# Handler installed by configure_logging, replaced on reconfiguration
_handler: Optional[logging.Handler] = None


def get_log_level() -> int:
    """
    Level named by CARTIER_LOG_LEVEL, falling back to LOG_LEVEL and then INFO.

    An unknown name warns on stderr and yields INFO; computations log their
    per-place progress at DEBUG, so INFO keeps stderr to one line per command.
    """
    raw = os.getenv(LOG_LEVEL_ENV) or os.getenv("LOG_LEVEL") or DEFAULT_LOG_LEVEL
    name = raw.strip().upper()
    if name in VALID_LEVELS:
        return VALID_LEVELS[name]
    print(
        f"Warning: Invalid {LOG_LEVEL_ENV} '{raw}'. "
        f"Valid values: {', '.join(VALID_LEVELS)}. Using {DEFAULT_LOG_LEVEL}.",
        file=sys.stderr,
    )
    return VALID_LEVELS[DEFAULT_LOG_LEVEL]


def configure_logging(
    level: Optional[int] = None,
    verbose: bool = False,
    stream: Optional[TextIO] = None,
) -> logging.Logger:
    """
    Attach one stderr handler to the cartier_lab logger tree.

    Only the package logger is touched, so an application embedding the
    library keeps its own root configuration. stdout stays reserved for
    reports. Calling this again swaps the handler instead of stacking a
    second one.

    Args:
        level: Override log level (default: from CARTIER_LOG_LEVEL)
        verbose: Timestamped format with the module name (the --dev mode)
        stream: Destination, sys.stderr when omitted

    Returns:
        The configured package logger
    """
    global _handler

    if level is None:
        level = get_log_level()

    package = logging.getLogger(PACKAGE_LOGGER)
    if _handler is not None:
        package.removeHandler(_handler)
    _handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT if verbose else LOG_FORMAT_SIMPLE))
    package.addHandler(_handler)
    package.setLevel(level)
    package.propagate = False
    return package


def get_logger(name: str) -> logging.Logger:
    """Logger under the cartier_lab namespace; `__main__` maps to cartier_lab.main."""
    if name == "__main__":
        name = f"{PACKAGE_LOGGER}.main"
    elif name != PACKAGE_LOGGER and not name.startswith(f"{PACKAGE_LOGGER}."):
        name = f"{PACKAGE_LOGGER}.{name}"
    return logging.getLogger(name)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(
            f"Warning: Invalid {name} '{raw}', using {default}.",
            file=sys.stderr,
        )
        return default


@dataclass(frozen=True)
class Settings:
    """
    Command defaults loaded from environment variables.

    Attributes:
        precision: Default truncation order M for local computations
        output_format: Default report format (json, csv or text)
        seed: Default seed for the randomized self-test draws
        workers: Thread pool size for per-place sweeps
    """

    precision: int = 30
    output_format: str = "json"
    seed: int = 0
    workers: int = 1

    @classmethod
    def from_env(cls) -> "Settings":
        """Load settings from CARTIER_* environment variables."""
        output_format = os.getenv("CARTIER_FORMAT", "json").lower()
        if output_format not in VALID_FORMATS:
            print(
                f"Warning: Invalid CARTIER_FORMAT '{output_format}', using json.",
                file=sys.stderr,
            )
            output_format = "json"
        return cls(
            precision=_env_int("CARTIER_PRECISION", 30),
            output_format=output_format,
            seed=_env_int("CARTIER_SEED", 0),
            workers=max(1, _env_int("CARTIER_WORKERS", 1)),
        )
