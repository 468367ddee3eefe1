"""Command-line interface for latticetdma.

Subcommands build and verify schedules, check clique numbers, tabulate the
SINR feasibility region and run the deployment simulations and sweeps. Data
goes to ``--out`` (or stdout); summaries and errors go to stderr.
"""
# PYTHON_ARGCOMPLETE_OK

from __future__ import annotations

import argparse
import logging
import signal
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, NoReturn

from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from . import __version__
from ._pkgmeta import get_package_info
from .config import (
    CONFIG_KEYS,
    Command,
    RunConfig,
    build_config,
    load_config_file,
    parse_cli_values,
    validate_config,
)
from .constants import (
    CLIQUE_NODE_BUDGET,
    DEFAULT_BETA,
    DEFAULT_ETA,
    DEFAULT_EXTENT_SIDE,
    DEFAULT_JOBS,
    DEFAULT_K_SWEEP_REFERENCE_K,
    DEFAULT_NODE_COUNT,
    DEFAULT_POWER_MARGIN,
    DEFAULT_RINGS,
    DEFAULT_SEED,
    EXIT_CODE_FAILURE,
    EXIT_CODE_OK,
    EXIT_CODE_SOFTWARE,
    EXIT_CODE_USAGE,
    RNG_IDENTITY,
    STDOUT_PATH,
    UNIX_SIGNAL_EXIT_OFFSET,
    OutputFormat,
    SweepAxis,
)
from .deployment import generate
from .errors import ConfigSpecError, InvalidArgumentError, ScheduleFileError
from .experiments import aggregate, f_sweep, k_sweep, simulate_seeds, size_sweep
from .exporter import exporter_for, load_schedule_csv
from .interference import clique_report
from .lattice import NetworkExtent
from .render import OutputRenderer
from .reports import (
    clique_table,
    feasibility_table,
    positions_table,
    rho_table,
    schedule_table,
    seeds_table,
    sweep_table,
    violations_table,
)
from .scheduler import build_schedule, slot_usage, verify_schedule
from .sinr import feasibility_grid

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence
    from types import ModuleType

    from .models import Scalar

EXIT_SUCCESS = EXIT_CODE_OK
EXIT_FAILURE = EXIT_CODE_FAILURE
EXIT_USAGE_ERROR = EXIT_CODE_USAGE
EXIT_FATAL_ERROR = EXIT_CODE_SOFTWARE

# Global console for summaries, log records and error panels
console = Console(stderr=True)

logging.basicConfig(
    level=logging.WARNING,
    format="%(message)s",
    handlers=[RichHandler(console=console, show_time=False, show_path=False)],
)
logger = logging.getLogger(__name__)

if TYPE_CHECKING:
    argcomplete: ModuleType | None
else:
    try:
        import argcomplete  # type: ignore[import-not-found]
    except ImportError:  # pragma: no cover
        argcomplete = None
        logger.debug("argcomplete is not installed, skipping autocomplete")


class RichArgumentParser(argparse.ArgumentParser):
    """ArgumentParser with Rich error formatting."""

    def error(self, message: str) -> NoReturn:
        """Override error to provide Rich formatted error messages."""
        console.print(
            Panel(
                f"[red]{message}[/red]",
                title="[bold red]❌ Argument Error[/bold red]",
                border_style="red",
                padding=(1, 2),
            ),
        )
        self.print_usage(sys.stderr)
        sys.exit(EXIT_USAGE_ERROR)


class RichHelpFormatter(
    argparse.ArgumentDefaultsHelpFormatter,
    argparse.RawDescriptionHelpFormatter,
):
    """Combined formatter that shows defaults while keeping raw layout."""


@dataclass(frozen=True, slots=True)
class CommandOptions:
    """Per-invocation options that are not part of :class:`RunConfig`.

    Attributes:
        metadata: Entries added to every exported table.
        schedule_csv: Schedule file given to ``verify``.
        positions: Also export per-seed node positions in ``simulate``.

    """

    metadata: dict[str, Scalar] = field(default_factory=dict)
    schedule_csv: str | None = None
    positions: bool = False


COMMAND_HELP: dict[str, str] = {
    "schedule": "Build the slot assignment of a lattice box and emit x,y,slot rows.",
    "verify": "Check a schedule (built-in, or SCHEDULE_CSV) for k-hop, primary and coverage violations.",
    "clique": "Compare closed-form and brute-force clique numbers and report the approximation ratio.",
    "feasibility": "Tabulate (D/d)max and βmax of the SINR feasibility region over a (γ, k) grid.",
    "simulate": "Deploy perturbed nodes, power them at the threshold and report the SINR margin ρ.",
    "sweep": "Repeat the simulation over k, f or the network size.",
}


def _add_parameter_flags(parser: argparse.ArgumentParser) -> None:
    """Add the flags shared by every subcommand (one per config key)."""
    params = parser.add_argument_group("Parameters")
    params.add_argument("--config", metavar="PATH", help="Read key=value defaults from PATH (flags win).")
    params.add_argument("--kind", metavar="{hex,square}", help="Lattice topology (default: hex).")
    params.add_argument("--k", metavar="LIST", help="Interference parameter(s): a,b,c or start:stop[:step].")
    params.add_argument(
        "--extent",
        metavar="WxH",
        help=f"Lattice box size, or N for N×N (default: {DEFAULT_EXTENT_SIDE}x{DEFAULT_EXTENT_SIDE}).",
    )
    params.add_argument("--gamma", metavar="LIST", help="Path-loss exponent(s), each > 2.")
    params.add_argument("--beta", metavar="FLOAT", help=f"SINR threshold for feasibility (default: {DEFAULT_BETA:g}).")
    params.add_argument("--f", metavar="LIST", help="Fraction(s) of the way towards the region boundary, in [0, 1].")
    params.add_argument("--eta", metavar="FLOAT", help=f"Noise power (default: {DEFAULT_ETA:g}).")
    params.add_argument("--seed", metavar="LIST", help=f"Deployment seed(s) (default: {DEFAULT_SEED}).")
    params.add_argument("--nodes", metavar="LIST", help=f"Network size(s) (default: {DEFAULT_NODE_COUNT}).")
    params.add_argument(
        "--rings",
        metavar="INT",
        help=f"Rings of the exact interference sum (default: {DEFAULT_RINGS}).",
    )
    params.add_argument(
        "--margin",
        metavar="FLOAT",
        help=f"Relative power margin above the threshold (default: {DEFAULT_POWER_MARGIN:g}).",
    )
    params.add_argument("--jobs", metavar="INT", help=f"Worker processes for simulations (default: {DEFAULT_JOBS}).")
    params.add_argument(
        "--k-ref",
        dest="k_ref",
        metavar="INT",
        help=f"Reference k of a k sweep (default: {DEFAULT_K_SWEEP_REFERENCE_K}).",
    )
    params.add_argument(
        "--budget",
        metavar="INT",
        help=f"Node budget of the exact clique search (default: {CLIQUE_NODE_BUDGET}).",
    )
    params.add_argument("--over", metavar="{k,f,nodes}", help="Parameter varied by sweep (default: k).")

    output = parser.add_argument_group("Output options")
    output.add_argument("--out", metavar="PATH", help=f"Write the table to PATH ('{STDOUT_PATH}' for stdout).")
    output.add_argument("--format", metavar="{csv,json}", help="Output file format (default: csv).")
    output.add_argument(
        "--no-timestamp",
        action="store_true",
        default=False,
        help="Omit the generated_at metadata field so reruns are byte-identical.",
    )
    output.add_argument(
        "-q",
        "--quiet",
        action="store_true",
        default=False,
        help="Suppress the summary printed to stderr.",
    )
    output.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress (-v for INFO, -vv for DEBUG).",
    )


def create_parser() -> RichArgumentParser:
    """Create and configure argument parser.

    Returns:
        Configured RichArgumentParser instance.

    """
    parser = RichArgumentParser(
        prog="latticetdma",
        description=get_package_info().summary,
        formatter_class=RichHelpFormatter,
        epilog=f"""
Examples:
  - Schedule a 6x6 hexagonal box for k=2:
      latticetdma schedule --kind hex --k 2 --extent 6x6 --out hex.csv
  - Verify that schedule, then the built-in schedules for k=1..5:
      latticetdma verify hex.csv
      latticetdma verify --kind square --k 1:5 --extent 30x30
  - Clique numbers and approximation ratios:
      latticetdma clique --kind hex --k 2:4
  - Feasibility grid for plotting:
      latticetdma feasibility --kind square --gamma 2.5:6:0.5 --k 1:10 --out region.csv
  - Five seeds of a 4000-node deployment:
      latticetdma simulate --kind hex --k 2 --gamma 3 --f 0.5 --seed 0:4 --out runs/hex.csv
  - Size sweep:
      latticetdma sweep --over nodes --nodes 500,1000,2000,4000 --out size.csv

Exit codes:
  {EXIT_SUCCESS:>3}            : Success
  {EXIT_FAILURE:>3}            : Verification, clique or feasibility failure (report still written)
  {EXIT_USAGE_ERROR:>3}            : Invalid arguments or configuration
  {EXIT_FATAL_ERROR:>3} (EX_SOFTWARE) : Internal error
        """,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
        help="Show the latticetdma version and exit.",
    )

    # Unset flags stay absent so config-file values are not shadowed.
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    _add_parameter_flags(common)

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, help_text in COMMAND_HELP.items():
        sub = subparsers.add_parser(
            name,
            parents=[common],
            help=help_text,
            description=help_text,
            formatter_class=RichHelpFormatter,
        )
        if name == "verify":
            sub.add_argument(
                "schedule_csv",
                nargs="?",
                metavar="SCHEDULE_CSV",
                help="Schedule file written by 'schedule' (built-in schedule when omitted).",
            )
        elif name == "simulate":
            sub.add_argument(
                "--positions",
                action="store_true",
                help="Also write <out>.seed<N>.positions files with the perturbed node positions.",
            )
    return parser


def setup_signal_handlers() -> None:
    """Set up signal handlers for graceful shutdown."""

    def signal_handler(signum: int, _frame: object) -> NoReturn:
        """Handle interrupt signals gracefully.

        Args:
            signum: Signal number.
            _frame: Current stack frame (unused).

        """
        console.print("\n[yellow]⚠ Interrupted by user[/yellow]")
        sys.exit(UNIX_SIGNAL_EXIT_OFFSET + signum)

    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)


def configure_logging(verbosity: int) -> None:
    """Set the root level: WARNING by default, INFO with ``-v``, DEBUG with ``-vv``."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.getLogger().setLevel(level)


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge ``--config`` and flags into a validated :class:`RunConfig`.

    Raises:
        ConfigSpecError: If the file, a flag or the merged values are invalid.

    """
    config_path = getattr(args, "config", None)
    file_values = load_config_file(config_path) if config_path else {}
    cli_values = parse_cli_values({key: getattr(args, key, None) for key in sorted(CONFIG_KEYS)})
    return validate_config(build_config(file_values=file_values, cli_values=cli_values), args.command)


def export_metadata(*, timestamp: bool) -> dict[str, Scalar]:
    """Return the metadata appended to every exported table."""
    metadata: dict[str, Scalar] = {"tool": "latticetdma", "version": __version__, "rng": RNG_IDENTITY}
    if timestamp:
        metadata["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return metadata


def seed_output_path(out: str, seed: int, output_format: OutputFormat, *, suffix: str = "") -> str:
    """Return ``<out>.seed<N>[suffix].<ext>`` next to ``out``.

    Examples:
        >>> seed_output_path("runs/hex.csv", 3, OutputFormat.CSV)
        'runs/hex.seed3.csv'

    """
    path = Path(out)
    extension = path.suffix or f".{output_format.value}"
    stem = path.stem if path.suffix else path.name
    return str(path.with_name(f"{stem}.seed{seed}{suffix}{extension}"))


def cmd_schedule(config: RunConfig, renderer: OutputRenderer, options: CommandOptions) -> int:
    """Build the schedule of the configured box and export ``x,y,slot`` rows."""
    width, height = config.extent or (DEFAULT_EXTENT_SIDE, DEFAULT_EXTENT_SIDE)
    schedule = build_schedule(config.kind, config.ks[0], NetworkExtent.box(width, height))
    renderer.render_schedule(schedule, slot_usage(schedule))
    renderer.export(schedule_table(schedule, extent=(width, height)).with_metadata(**options.metadata), config.out)
    return EXIT_SUCCESS


def cmd_verify(config: RunConfig, renderer: OutputRenderer, options: CommandOptions) -> int:
    """Verify a schedule file, or the built-in schedule for every configured ``k``."""
    extent = NetworkExtent.box(*config.extent) if config.extent is not None else None
    if options.schedule_csv is not None:
        schedule, target = load_schedule_csv(options.schedule_csv, kind=config.kind, k=config.ks[0], extent=extent)
        checks = [(schedule, verify_schedule(schedule, target))]
    else:
        target = extent or NetworkExtent.box(DEFAULT_EXTENT_SIDE, DEFAULT_EXTENT_SIDE)
        checks = []
        for k in config.ks:
            schedule = build_schedule(config.kind, k, target)
            checks.append((schedule, verify_schedule(schedule, target)))
    for schedule, report in checks:
        renderer.render_verification(schedule, report)
    renderer.export(violations_table(checks).with_metadata(**options.metadata), config.out)
    return EXIT_SUCCESS if all(report.valid for _, report in checks) else EXIT_FAILURE


def cmd_clique(config: RunConfig, renderer: OutputRenderer, options: CommandOptions) -> int:
    """Report formula and oracle clique numbers with the approximation ratio."""
    extent = NetworkExtent.box(*config.extent) if config.extent is not None else None
    reports = [clique_report(config.kind, k, extent, budget=config.budget) for k in config.ks]
    renderer.render_cliques(reports)
    renderer.export(clique_table(reports).with_metadata(**options.metadata), config.out)
    return EXIT_FAILURE if any(report.agrees is False for report in reports) else EXIT_SUCCESS


def cmd_feasibility(config: RunConfig, renderer: OutputRenderer, options: CommandOptions) -> int:
    """Tabulate the feasibility region over the configured ``(γ, k)`` grid."""
    regions = feasibility_grid(config.kind, config.beta, config.gammas, config.ks)
    renderer.render_feasibility(regions)
    table = feasibility_table(regions, rings=config.rings)
    renderer.export(table.with_metadata(**options.metadata), config.out)
    return EXIT_SUCCESS if any(region.feasible for region in regions) else EXIT_FAILURE


def cmd_simulate(config: RunConfig, renderer: OutputRenderer, options: CommandOptions) -> int:
    """Simulate one operating point per seed; write per-seed reports and the summary."""
    point, results = simulate_seeds(
        config.kind,
        config.ks[0],
        config.gammas[0],
        config.fs[0],
        config.seed,
        nodes=config.node_counts[0],
        eta=config.eta,
        margin=config.margin,
        jobs=config.jobs,
    )
    stats = aggregate(results)
    renderer.render_simulation(point, results, stats)

    out = config.out if config.out != STDOUT_PATH else None
    if out is not None:
        for result in results:
            seed = result.task.seed
            renderer.export(
                rho_table(result).with_metadata(**options.metadata),
                seed_output_path(out, seed, config.output_format),
            )
            if options.positions:
                dep = generate(config.kind, NetworkExtent.for_node_count(result.task.nodes), result.task.dd, seed)
                renderer.export(
                    positions_table(dep).with_metadata(**options.metadata),
                    seed_output_path(out, seed, config.output_format, suffix=".positions"),
                )
    elif len(results) > 1 or options.positions:
        logger.warning("Per-seed reports are only written with --out PATH; emitting the summary only")

    renderer.export(seeds_table(point, results).with_metadata(**options.metadata), config.out)
    ok = point.feasible and all(r.feasible for r in results) and stats.violations == 0
    return EXIT_SUCCESS if ok else EXIT_FAILURE


def cmd_sweep(config: RunConfig, renderer: OutputRenderer, options: CommandOptions) -> int:
    """Run the configured sweep and export one row per swept value."""
    gamma = config.gammas[0]
    fixed: dict[str, Scalar]
    if config.over is SweepAxis.K:
        points = k_sweep(
            config.kind,
            gamma,
            config.ks,
            f=config.fs[0],
            k_ref=config.k_ref,
            nodes=config.node_counts[0],
            seeds=config.seed,
            eta=config.eta,
            margin=config.margin,
            jobs=config.jobs,
        )
        fixed = {"f": config.fs[0], "k_ref": config.k_ref, "nodes": config.node_counts[0]}
    elif config.over is SweepAxis.F:
        points = f_sweep(
            config.kind,
            config.ks[0],
            gamma,
            config.fs,
            nodes=config.node_counts[0],
            seeds=config.seed,
            eta=config.eta,
            margin=config.margin,
            jobs=config.jobs,
        )
        fixed = {"k": config.ks[0], "nodes": config.node_counts[0]}
    else:
        points = size_sweep(
            config.kind,
            config.ks[0],
            gamma,
            config.fs[0],
            config.node_counts,
            seeds=config.seed,
            eta=config.eta,
            margin=config.margin,
            jobs=config.jobs,
        )
        fixed = {"k": config.ks[0], "f": config.fs[0]}

    renderer.render_sweep(config.over.value, points)
    metadata: dict[str, Scalar] = {
        "kind": config.kind.value,
        "gamma": gamma,
        **fixed,
        "seeds": ",".join(str(seed) for seed in config.seed),
        "eta": config.eta,
        "margin": config.margin,
    }
    table = sweep_table(config.over.value, points, metadata=metadata)
    renderer.export(table.with_metadata(**options.metadata), config.out)
    return EXIT_FAILURE if any(point.stats.violations for point in points) else EXIT_SUCCESS


COMMAND_HANDLERS: dict[str, Callable[[RunConfig, OutputRenderer, CommandOptions], int]] = {
    "schedule": cmd_schedule,
    "verify": cmd_verify,
    "clique": cmd_clique,
    "feasibility": cmd_feasibility,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def _error_panel(message: object, title: str) -> Panel:
    return Panel(
        f"[red]{message}[/red]",
        title=f"[bold red]❌ {title}[/bold red]",
        border_style="red",
        padding=(1, 2),
    )


def run(args: argparse.Namespace) -> int:
    """Execute the parsed command; configuration errors map to exit code 2."""
    command: Command = args.command
    try:
        config = load_run_config(args)
    except ConfigSpecError as exc:
        console.print(_error_panel(exc, "Configuration Error"))
        return EXIT_USAGE_ERROR

    summary_console = Console(stderr=True, quiet=args.quiet)
    renderer = OutputRenderer(
        quiet=args.quiet,
        console=summary_console,
        exporter=exporter_for(config.output_format, summary_console),
    )
    options = CommandOptions(
        metadata=export_metadata(timestamp=not args.no_timestamp),
        schedule_csv=getattr(args, "schedule_csv", None),
        positions=getattr(args, "positions", False),
    )
    logger.info("Running %s for %s", command, config.kind.value)
    try:
        return COMMAND_HANDLERS[command](config, renderer, options)
    except ScheduleFileError as exc:
        console.print(_error_panel(exc, "Schedule File Error"))
        return EXIT_USAGE_ERROR
    except InvalidArgumentError as exc:
        console.print(_error_panel(exc, "Invalid Argument"))
        return EXIT_USAGE_ERROR


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI with Rich UI enhancements.

    Returns:
        Exit code: ``0`` on success, ``1`` on a verification, clique or
        feasibility failure, ``2`` on invalid arguments or configuration and
        ``70`` on internal error.

    """
    try:
        parser = create_parser()
        if argcomplete:  # pragma: no cover
            argcomplete.autocomplete(parser)

        setup_signal_handlers()
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        return run(args)

    except KeyboardInterrupt:
        console.print("\n[yellow]⚠ Interrupted by user[/yellow]")
        return UNIX_SIGNAL_EXIT_OFFSET + signal.SIGINT

    except Exception as e:
        logger.exception("Unexpected error")
        console.print(_error_panel(e, "Internal Error"))
        return EXIT_FATAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
