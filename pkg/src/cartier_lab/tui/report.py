"""
Report display for the text format.

Renders each command's results as Rich tables, followed by a verification
panel. The JSON payload is the source of truth; this view only reads it.
"""

from typing import Any, Optional

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from cartier_lab.report import Report

from .console import ReportConsole, TUIConfig, create_theme, get_console


def _status_text(console: ReportConsole, status: Optional[str]) -> Text:
    if status is None:
        return Text("-", style="muted")
    return Text(status, style=console.status_style(status))


def _outcome_detail(outcome: dict[str, Any]) -> str:
    witness = outcome.get("witness")
    if witness:
        if witness["kind"] == "trace":
            return f"Tr(b_-1) = {witness['trace']} != 0"
        return f"u^{witness['exponent']}: {witness['value']} vs forced {witness.get('forced')}"
    return ", ".join(outcome.get("freeParams", [])) or ""


def _zp_tables(console: ReportConsole, results: dict[str, Any]) -> None:
    for table_data in results.get("tables", []):
        table = Table(title=f"x_{table_data['N']}: local classes", title_justify="left")
        for column in ("place", "deg", "integral", "residue", "class", "preimage"):
            table.add_column(column)
        for row in table_data["rows"]:
            outcome = row["outcome"]
            table.add_row(
                row["place"],
                str(row["degree"]),
                "yes" if row["integral"] else "no",
                row["residue"],
                str(row["class"]),
                _status_text(console, None if outcome is None else outcome["status"]),
            )
        console.print(table)

    for search in results.get("searches", []):
        found = search["preimage"]
        style = "failed" if found else "solved"
        message = f"preimage {found}" if found else f"no preimage of height <= {search['bound']}"
        console.print(Text(f"x_{search['N']} - x_{search['K']}: {message}", style=style))


def _certificates(console: ReportConsole, results: dict[str, Any]) -> None:
    certificates = results.get("certificates", [])
    if not certificates:
        return
    table = Table(title="Nonperiodicity certificates", title_justify="left")
    for column in ("pair", "Pmax", "Lmax", "refuted", "inconclusive", "verified"):
        table.add_column(column)
    for cert in certificates:
        ok = cert["complete"] and cert["verified"]
        table.add_row(
            f"x_{cert['N']} - x_{cert['K']}",
            str(cert["bound"]["Pmax"]),
            str(cert["bound"]["Lmax"]),
            str(len(cert["refutations"])),
            str(len(cert["inconclusive"])),
            Text("yes" if ok else "no", style="solved" if ok else "failed"),
        )
    console.print(table)


def _wound(console: ReportConsole, results: dict[str, Any]) -> None:
    table = Table(title=f"x_{results['N']} = (t^-{results['N']} dt, 0)", title_justify="left")
    for column in ("place", "status", "t_1 unit", "detail"):
        table.add_column(column)
    for outcome in results.get("family", []):
        unit = outcome.get("unitCondition")
        table.add_row(
            outcome["place"],
            _status_text(console, outcome["status"]),
            "-" if unit is None else ("yes" if unit else "no"),
            _outcome_detail(outcome),
        )
    console.print(table)
    difference = results.get("difference")
    if difference is not None:
        console.print(
            Text.assemble(
                (f"x_{results['N']} - x_{results['K']} at {difference['place']}: ", "label"),
                _status_text(console, difference["status"]),
                f"  {_outcome_detail(difference)}",
            )
        )


def _points(console: ReportConsole, results: dict[str, Any]) -> None:
    points = results.get("points", [])
    if points:
        table = Table(title="Local points on t x^p = y^p - y", title_justify="left")
        for column in ("place", "x", "y"):
            table.add_column(column)
        for point in points:
            table.add_row(point["place"], point["input"], _series_text(point["y"]))
        console.print(table)
    search = results.get("global")
    if search is not None:
        found = ", ".join(f"({p['x']}, {p['y']})" for p in search["points"])
        console.print(Text(f"Global points of height <= {search['bound']}: {found}", style="label"))


def _series_text(data: dict[str, Any]) -> str:
    coeffs = data["coeffs"]
    terms = [f"{c}*u^{data['lowExp'] + i}" for i, c in enumerate(coeffs) if c != "0"]
    tail = "" if data["prec"] is None else f"O(u^{data['prec']})"
    return " + ".join(terms + ([tail] if tail else [])) or "0"


def _selftest(console: ReportConsole, results: dict[str, Any]) -> None:
    table = Table(title="Self-test", title_justify="left")
    for column in ("module", "check", "result", "detail"):
        table.add_column(column)
    for check in results["checks"]:
        table.add_row(
            check["module"],
            check["name"],
            Text("pass" if check["passed"] else "FAIL", style="solved" if check["passed"] else "failed"),
            check["detail"],
        )
    console.print(table)


_RENDERERS = {
    "zp": (_zp_tables, _certificates),
    "wound": (_wound,),
    "points": (_points,),
    "cert": (_certificates,),
    "selftest": (_selftest,),
}


def print_report(report: Report, console: Optional[ReportConsole] = None) -> None:
    """Print a report with tables per result section and a verification panel."""
    console = console or get_console()
    for renderer in _RENDERERS.get(report.command, ()):
        renderer(console, report.results)
    style = "solved" if report.verified else "failed"
    console.print(
        Panel(
            Text("verified" if report.verified else "NOT verified", style=style),
            title=f"[label]{report.command}[/]",
            title_align="left",
            border_style=style,
            padding=(0, 1),
        )
    )


def print_error(message: str, *, error_type: Optional[str] = None) -> None:
    """Print a one-line diagnostic to stderr."""
    console = Console(stderr=True, theme=create_theme(TUIConfig.from_env()), highlight=False)
    prefix = f"{error_type}: " if error_type else "error: "
    console.print(Text(prefix + message, style="failed"), soft_wrap=True)


__all__ = ["print_report", "print_error"]
