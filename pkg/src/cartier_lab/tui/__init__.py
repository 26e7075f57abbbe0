"""
Rich TUI Interface Module

Renders reports for the `text` output format.

Components:
- ReportConsole: Console wrapper with status colours
- TUIConfig: Colour configuration from COLOR_* environment variables
- print_report: Tables and panels for each command's results
"""

from cartier_lab.tui.console import ReportConsole, TUIConfig, create_console, get_console
from cartier_lab.tui.report import print_error, print_report

__all__ = [
    "ReportConsole",
    "TUIConfig",
    "create_console",
    "get_console",
    "print_report",
    "print_error",
]
