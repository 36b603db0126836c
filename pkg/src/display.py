"""
Rich console output for lattice-maximal.
Everything here prints to standard error; standard output carries only the JSON document.
"""
from typing import Any, Dict, Optional

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from src.config import config
from src.models import CKReport, ConstantsReport, EstimateResult, SuiteReport

VERDICT_STYLES = {"pass": "bold green", "fail": "bold red", "no-verdict": "bold yellow"}


def _fmt(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class CKDisplay:
    """Rich console display manager for verification runs."""

    def __init__(self, quiet: bool = False):
        self.console = Console(stderr=True, quiet=quiet)

    def set_quiet(self, quiet: bool):
        self.console.quiet = quiet

    def show_header(self, command: str):
        """Display application header."""
        header_text = Text("lattice-maximal", style="bold blue")
        header_text.append(f"  {command}", style="bold yellow")
        self.console.print(Panel(header_text, border_style="blue", padding=(0, 2)))

    def show_config_status(self):
        """Display configuration warnings, if any."""
        issues = config.validate_required_config()
        if issues:
            self.console.print("[bold yellow]Configuration Status:[/bold yellow]")
            for issue in issues:
                self.console.print(f"  {issue}")
            self.console.print("")

    def show_constants(self, report: ConstantsReport):
        table = Table(title=f"Constants for p={report.p}, q={report.q}", show_header=True, header_style="bold magenta")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", justify="right")
        for name in ("tau", "kappa", "ell", "u", "feasibility_bound", "feasible", "gamma", "delta", "classical", "corollary"):
            table.add_row(name, _fmt(getattr(report, name)))
        self.console.print(table)

    def show_estimate(self, title: str, result: EstimateResult):
        text = Text()
        text.append(f"{result.value:.8g}", style="bold green" if result.exact else "bold yellow")
        text.append("  exact\n" if result.exact else "  certified lower bound\n", style="dim")
        text.append(f"method: {result.method}\n", style="white")
        stats = result.trials
        if stats.evaluations:
            text.append(
                f"restarts: {stats.restarts}  evaluations: {stats.evaluations}  partitions: {stats.partitions}",
                style="dim",
            )
        self.console.print(Panel(text, title=title, border_style="cyan", padding=(1, 2)))

    def show_ck_report(self, report: CKReport, title: str = "Maximal inequality"):
        table = Table(title=title, show_header=False)
        table.add_column("Field", style="cyan")
        table.add_column("Value", justify="right")
        table.add_row("p, q", f"{report.p}, {report.q}")
        table.add_row("κ, ℓ, u", f"{report.kappa:.6g}, {report.ell:.6g}, {report.u:.6g}")
        table.add_row("γ", _fmt(report.gamma))
        table.add_row("‖T‖", f"{report.op_norm.value:.8g} ({'exact' if report.op_norm.exact else 'lower bound'})")
        table.add_row("max ratio", _fmt(report.max_ratio))
        table.add_row("margin", _fmt(report.margin))
        table.add_row("trials", str(report.trial_count))
        table.add_row("verdict", Text(report.verdict, style=VERDICT_STYLES[report.verdict]))
        self.console.print(table)

    def show_mapping(self, title: str, values: Dict[str, Any]):
        table = Table(title=title, show_header=False)
        table.add_column("Field", style="cyan")
        table.add_column("Value", justify="right")
        for key in sorted(values):
            table.add_row(key, _fmt(values[key]))
        self.console.print(table)

    def show_suite(self, report: SuiteReport):
        table = Table(title=f"Acceptance suite (seed {report.seed}{', quick' if report.quick else ''})", header_style="bold magenta")
        table.add_column("#", justify="right", style="dim")
        table.add_column("Criterion", style="cyan")
        table.add_column("Result", justify="center")
        for i, criterion in enumerate(report.criteria, 1):
            status = Text("pass", style="bold green") if criterion.passed else Text("FAIL", style="bold red")
            table.add_row(str(i), criterion.name, status)
        self.console.print(table)
        style = "green" if report.passed else "red"
        self.console.print(f"[bold {style}]{'All criteria passed' if report.passed else 'Some criteria failed'}[/bold {style}]")

    def show_error(self, message: str, details: Optional[str] = None):
        """Display error message."""
        error_text = Text(message, style="bold red")
        if details:
            error_text.append(f"\n\nDetails: {details}", style="red")
        self.console.print(Panel(error_text, title="Error", border_style="red", padding=(1, 2)))

    def show_warning(self, message: str):
        """Display warning message."""
        self.console.print(Panel(Text(message, style="yellow"), title="Warning", border_style="yellow", padding=(1, 2)))


# Global display instance
display = CKDisplay()
