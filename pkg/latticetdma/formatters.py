"""Rich formatting helpers for the human-readable command summaries."""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.panel import Panel
from rich.table import Table
from rich.text import Text

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .deployment import OperatingPoint
    from .experiments import AggregateRho, SimulationResult, SweepPoint
    from .interference import CliqueReport
    from .scheduler import Schedule, VerificationReport
    from .sinr import FeasibilityRegion


def format_number(value: float | None, *, digits: int = 4) -> str:
    """Format a float for display; ``None`` shows as ``n/a``.

    Examples:
        >>> format_number(1.23456)
        '1.235'
        >>> format_number(None)
        'n/a'

    """
    if value is None:
        return "n/a"
    return f"{value:.{digits}g}"


def format_rho(value: float | None) -> str:
    """Format ρ in green when it meets the threshold, red otherwise."""
    if value is None:
        return "[dim]n/a[/dim]"
    style = "green" if value >= 1.0 else "red"
    return f"[{style}]{format_number(value)}[/{style}]"


def format_schedule_panel(schedule: Schedule, usage: Sequence[int]) -> Panel:
    """Summarize a built schedule: frame length and per-slot load."""
    text = Text()
    text.append(f"{schedule.kind.value}", style="bold cyan")
    text.append(f"  k={schedule.k}  frame={schedule.frame_length}  nodes={len(schedule)}")
    if usage:
        text.append(f"\nnodes per slot: min {min(usage)}, max {max(usage)}", style="dim")
    return Panel(text, title="[bold blue]Schedule[/bold blue]", border_style="blue", padding=(0, 1))


def format_verification_panel(schedule: Schedule, report: VerificationReport) -> Panel:
    """Show the verification verdict with per-reason violation counts."""
    header = f"{schedule.kind.value} k={schedule.k} frame={schedule.frame_length}"
    if report.valid:
        body = Text()
        body.append("✓ ", style="bold green")
        body.append(f"{header}: no violations ", style="green")
        body.append(f"({report.node_count} nodes, {report.checked_pairs} pairs checked)", style="dim")
        return Panel(body, title="[bold green]Verify[/bold green]", border_style="green", padding=(0, 1))

    body = Text()
    body.append("✗ ", style="bold red")
    body.append(f"{header}: {len(report.violations)} violation(s)\n", style="red")
    for reason, count in sorted(report.counts().items()):
        body.append(f"  {reason}: {count}\n", style="yellow")
    body.rstrip()
    return Panel(body, title="[bold red]Verify[/bold red]", border_style="red", padding=(0, 1))


def format_clique_table(reports: Sequence[CliqueReport]) -> Table:
    """Tabulate formula and oracle clique numbers with the approximation ratio."""
    table = Table(title="Maximum cliques", show_lines=False)
    table.add_column("kind", style="cyan")
    table.add_column("k", justify="right")
    table.add_column("formula", justify="right")
    table.add_column("oracle", justify="right")
    table.add_column("frame", justify="right")
    table.add_column("ratio", justify="right")
    table.add_column("greedy", justify="right")
    table.add_column("status")
    for report in reports:
        if report.oracle is None:
            oracle, status = "-", "[yellow]oracle skipped (budget)[/yellow]"
        else:
            oracle = str(report.oracle.size)
            status = "[green]agree[/green]" if report.agrees else "[red]disagree[/red]"
        table.add_row(
            report.kind.value,
            str(report.k),
            str(report.formula),
            oracle,
            str(report.frame_length),
            f"{report.ratio} ({float(report.ratio):.3f})",
            "-" if report.greedy_colors is None else str(report.greedy_colors),
            status,
        )
    return table


def format_feasibility_table(regions: Sequence[FeasibilityRegion]) -> Table:
    """Tabulate region boundaries; infeasible rows are highlighted."""
    table = Table(title="Feasibility region", show_lines=False)
    table.add_column("kind", style="cyan")
    table.add_column("γ", justify="right")
    table.add_column("k", justify="right")
    table.add_column("(D/d)max", justify="right")
    table.add_column("βmax", justify="right")
    table.add_column("feasible", justify="center")
    for region in regions:
        table.add_row(
            region.kind.value,
            format_number(region.gamma),
            str(region.k),
            format_number(region.dd_max),
            format_number(region.beta_max),
            "[green]yes[/green]" if region.feasible else "[red]no[/red]",
        )
    return table


def format_simulation_panel(point: OperatingPoint, results: Sequence[SimulationResult], stats: AggregateRho) -> Panel:
    """Summarize a simulation: operating point, per-seed Min ρ and pooled statistics."""
    text = Text.from_markup(
        f"[bold cyan]{point.kind.value}[/bold cyan]  k={point.k}  γ={format_number(point.gamma)}  "
        f"f={format_number(point.f)}\n"
        f"β={format_number(point.beta)}  D/d={format_number(point.dd)}  "
        f"(βmax={format_number(point.beta_max)}, (D/d)max={format_number(point.dd_max)})\n",
    )
    for result in results:
        report = result.report
        if report is None:
            text.append_text(Text.from_markup(f"  seed {result.task.seed}: [red]infeasible[/red]\n"))
            continue
        text.append_text(
            Text.from_markup(
                f"  seed {result.task.seed}: min ρ {format_rho(report.min_rho)}, "
                f"avg ρ {format_number(report.avg_rho)}, {report.count} links\n",
            ),
        )
    text.append_text(
        Text.from_markup(
            f"Min(ρ) {format_rho(stats.min_rho)}  Avg(ρ) {format_number(stats.avg_rho)}  "
            f"Avg/Min {format_number(stats.avg_over_min)}  violations {stats.violations}",
        ),
    )
    ok = point.feasible and stats.violations == 0 and stats.count > 0
    style = "green" if ok else "red"
    return Panel(text, title=f"[bold {style}]Simulation[/bold {style}]", border_style=style, padding=(0, 1))


def format_sweep_table(over: str, points: Sequence[SweepPoint]) -> Table:
    """Tabulate a sweep with one row per value of ``over``."""
    table = Table(title=f"Sweep over {over}", show_lines=False)
    table.add_column(over, style="cyan", justify="right")
    table.add_column("β", justify="right")
    table.add_column("D/d", justify="right")
    table.add_column("power", justify="right")
    table.add_column("Min(ρ)", justify="right")
    table.add_column("Avg(ρ)", justify="right")
    table.add_column("Avg/Min", justify="right")
    for point in points:
        table.add_row(
            format_number(point.value),
            format_number(point.beta),
            format_number(point.dd),
            format_number(point.power),
            format_rho(point.stats.min_rho),
            format_number(point.stats.avg_rho),
            format_number(point.stats.avg_over_min),
        )
    return table
