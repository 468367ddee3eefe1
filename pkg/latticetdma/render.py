"""Output orchestration: human summaries on stderr, tables through an exporter.

Data goes to stdout or ``--out`` through the exporter; everything printed
here goes to the stderr console, so piping ``latticetdma schedule`` into a
file captures only the CSV.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.console import Console

from .exporter import CSVExporter
from .formatters import (
    format_clique_table,
    format_feasibility_table,
    format_schedule_panel,
    format_simulation_panel,
    format_sweep_table,
    format_verification_panel,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    from rich.console import RenderableType

    from .deployment import OperatingPoint
    from .experiments import AggregateRho, SimulationResult, SweepPoint
    from .interfaces import Exporter
    from .interference import CliqueReport
    from .models import ResultTable
    from .scheduler import Schedule, VerificationReport
    from .sinr import FeasibilityRegion


class OutputRenderer:
    """Coordinates formatters and the exporter for one command.

    Attributes:
        quiet: Suppress the human-readable summary.
        console: Rich console the summary is printed to.
        exporter: Exporter that persists result tables.

    """

    __slots__ = ("console", "exporter", "quiet")

    def __init__(
        self,
        *,
        quiet: bool = False,
        console: Console | None = None,
        exporter: Exporter | None = None,
    ) -> None:
        """Initialize the renderer.

        Args:
            quiet: Suppress summaries (export still happens).
            console: Console for summaries; defaults to stderr.
            exporter: Table exporter; defaults to CSV.

        """
        self.quiet = quiet
        self.console = console or Console(stderr=True, quiet=quiet)
        self.exporter = exporter or CSVExporter(self.console)

    def _show(self, renderable: RenderableType) -> None:
        if self.quiet:
            return
        self.console.print(renderable)

    def render_schedule(self, schedule: Schedule, usage: Sequence[int]) -> None:
        """Print the schedule summary panel."""
        self._show(format_schedule_panel(schedule, usage))

    def render_verification(self, schedule: Schedule, report: VerificationReport) -> None:
        """Print the verification verdict."""
        self._show(format_verification_panel(schedule, report))

    def render_cliques(self, reports: Sequence[CliqueReport]) -> None:
        """Print the clique table."""
        self._show(format_clique_table(reports))

    def render_feasibility(self, regions: Sequence[FeasibilityRegion]) -> None:
        """Print the feasibility grid."""
        self._show(format_feasibility_table(regions))

    def render_simulation(
        self,
        point: OperatingPoint,
        results: Sequence[SimulationResult],
        stats: AggregateRho,
    ) -> None:
        """Print the per-seed and pooled ρ summary."""
        self._show(format_simulation_panel(point, results, stats))

    def render_sweep(self, over: str, points: Sequence[SweepPoint]) -> None:
        """Print the sweep table."""
        self._show(format_sweep_table(over, points))

    def export(self, table: ResultTable, output_path: str | None) -> None:
        """Persist ``table`` through the configured exporter."""
        self.exporter.export(table, output_path)
