"""
Rich Console Setup

Provides the themed console used for the `text` report format.
Status colours are configured via environment variables.
"""

import os
from dataclasses import dataclass
from typing import IO, Optional

from rich.console import Console
from rich.style import Style
from rich.theme import Theme


@dataclass
class TUIConfig:
    """
    TUI configuration loaded from environment variables.

    Attributes:
        color_solved: Color for Solved outcomes and passing checks
        color_refuted: Color for NoSolution outcomes (a verified refutation)
        color_failed: Color for failed verification and failing checks
    """

    color_solved: str = "green"
    color_refuted: str = "yellow"
    color_failed: str = "red"

    @classmethod
    def from_env(cls) -> "TUIConfig":
        """Load configuration from environment variables."""
        return cls(
            color_solved=os.getenv("COLOR_SOLVED", "green"),
            color_refuted=os.getenv("COLOR_REFUTED", "yellow"),
            color_failed=os.getenv("COLOR_FAILED", "red"),
        )


def create_theme(config: TUIConfig) -> Theme:
    """Create a Rich theme from TUI configuration."""
    return Theme(
        {
            "solved": Style(color=config.color_solved, bold=True),
            "refuted": Style(color=config.color_refuted, bold=True),
            "failed": Style(color=config.color_failed, bold=True),
            "label": Style(bold=True),
            "muted": Style(dim=True),
        }
    )


class ReportConsole:
    """Rich console wrapper with the report theme."""

    def __init__(self, config: Optional[TUIConfig] = None, file: Optional[IO[str]] = None):
        """
        Args:
            config: TUI configuration. If None, loads from environment.
            file: Stream to write to (default: stdout)
        """
        self.config = config or TUIConfig.from_env()
        self._theme = create_theme(self.config)
        self.console = Console(theme=self._theme, file=file, highlight=False)

    def status_style(self, status: str) -> str:
        """Theme style name for an outcome status."""
        return {"Solved": "solved", "NoSolution": "refuted"}.get(status, "failed")

    def print(self, *args, **kwargs) -> None:
        """Passthrough to underlying Rich console."""
        self.console.print(*args, **kwargs)


# Global console instance
_console: Optional[ReportConsole] = None


def get_console() -> ReportConsole:
    """Get or create the global console instance."""
    global _console
    if _console is None:
        _console = ReportConsole()
    return _console


def create_console(config: Optional[TUIConfig] = None, file: Optional[IO[str]] = None) -> ReportConsole:
    """Create a new console instance (used when the text report goes to a file)."""
    return ReportConsole(config, file)
