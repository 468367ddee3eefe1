"""Conversion of domain results into exportable :class:`ResultTable` objects."""

from __future__ import annotations

from collections import Counter
from typing import TYPE_CHECKING

from .constants import RNG_IDENTITY
from .experiments import aggregate
from .models import ResultTable, Scalar
from .sinr import SinrParams, exact_regular_interference, interference_bound

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .deployment import Deployment, OperatingPoint
    from .experiments import SimulationResult, SweepPoint
    from .interference import CliqueReport
    from .lattice import LatticeCoord
    from .scheduler import Schedule, VerificationReport
    from .sinr import FeasibilityRegion

SCHEDULE_COLUMNS = ("x", "y", "slot")
VIOLATION_COLUMNS = ("slot", "node_a", "node_b", "reason")
RHO_COLUMNS = ("slot", "tx_x", "tx_y", "rx_x", "rx_y", "sinr", "rho")
POSITION_COLUMNS = ("x", "y", "px", "py")
CLIQUE_COLUMNS = (
    "kind",
    "k",
    "formula",
    "oracle",
    "frame_length",
    "ratio",
    "greedy_colors",
    "nodes",
    "status",
    "witness",
)


def _extent_label(width: int, height: int) -> str:
    return f"{width}x{height}"


def schedule_table(schedule: Schedule, *, extent: tuple[int, int] | None = None) -> ResultTable:
    """Return the ``x,y,slot`` table with kind, ``k`` and frame length metadata."""
    metadata: dict[str, Scalar] = {
        "kind": schedule.kind.value,
        "k": schedule.k,
        "frame_length": schedule.frame_length,
        "nodes": len(schedule),
    }
    if extent is not None:
        metadata["extent"] = _extent_label(*extent)
    return ResultTable(name="schedule", columns=SCHEDULE_COLUMNS, rows=tuple(schedule.to_rows()), metadata=metadata)


def _joined(values: Sequence[int]) -> Scalar:
    return values[0] if len(values) == 1 else ",".join(str(v) for v in values)


def violations_table(checks: Sequence[tuple[Schedule, VerificationReport]]) -> ResultTable:
    """Return the ``slot,node_a,node_b,reason`` rows of one or more verifications.

    Nodes are written ``x:y``. With several schedules (one per ``k``) the
    rows are concatenated and ``k``/``frame_length`` metadata list every value.
    """
    counts: Counter[str] = Counter()
    rows: list[tuple[Scalar, ...]] = []
    for _, report in checks:
        counts.update(report.counts())
        rows.extend(v.to_row() for v in report.violations)
    kinds = sorted({schedule.kind.value for schedule, _ in checks})
    return ResultTable(
        name="violations",
        columns=VIOLATION_COLUMNS,
        rows=tuple(rows),
        metadata={
            "kind": ",".join(kinds),
            "k": _joined([schedule.k for schedule, _ in checks]),
            "frame_length": _joined([schedule.frame_length for schedule, _ in checks]),
            "nodes": max((report.node_count for _, report in checks), default=0),
            "checked_pairs": sum(report.checked_pairs for _, report in checks),
        },
        summary={"valid": all(report.valid for _, report in checks), "violations": len(rows), **dict(counts)},
    )


def _witness_label(witness: Sequence[LatticeCoord]) -> str:
    return ";".join(f"{node.x}:{node.y}" for node in witness)


def clique_table(reports: Sequence[CliqueReport]) -> ResultTable:
    """Return one row per ``(kind, k)`` with formula, oracle and ratio."""
    rows: list[tuple[Scalar, ...]] = []
    for report in reports:
        if report.oracle is None:
            status, oracle, witness = "oracle skipped (budget)", None, ""
        else:
            status = "agree" if report.agrees else "disagree"
            oracle, witness = report.oracle.size, _witness_label(report.oracle.witness)
        rows.append(
            (
                report.kind.value,
                report.k,
                report.formula,
                oracle,
                report.frame_length,
                str(report.ratio),
                report.greedy_colors,
                report.node_count,
                status,
                witness,
            ),
        )
    return ResultTable(
        name="clique",
        columns=CLIQUE_COLUMNS,
        rows=tuple(rows),
    )


def _unit_interference(region: FeasibilityRegion, rings: int) -> tuple[float, float]:
    params = SinrParams(beta=region.beta, gamma=region.gamma, k=region.k)
    bound = interference_bound(region.kind, params)
    exact = exact_regular_interference(region.kind, params, rings, receiver_offset=False)
    return bound, exact


def feasibility_table(regions: Sequence[FeasibilityRegion], *, rings: int | None = None) -> ResultTable:
    """Return the ``(γ, k)`` grid of region boundaries, flagging infeasible rows.

    With ``rings`` the table also carries, at ``d = D = P = 1``, the
    closed-form interference bound and the exact interference truncated at
    ``rings`` rings.
    """
    columns = ("kind", "gamma", "k", "beta", "dd_max", "beta_max", "feasible")
    rows: list[tuple[Scalar, ...]] = []
    for r in regions:
        row: tuple[Scalar, ...] = (r.kind.value, r.gamma, r.k, r.beta, r.dd_max, r.beta_max, r.feasible)
        if rings is not None:
            row = (*row, *_unit_interference(r, rings))
        rows.append(row)
    metadata: dict[str, Scalar] = {"rings": rings} if rings is not None else {}
    return ResultTable(
        name="feasibility",
        columns=(*columns, "bound", "exact") if rings is not None else columns,
        rows=tuple(rows),
        metadata=metadata,
        summary={"points": len(rows), "infeasible": sum(1 for r in regions if not r.feasible)},
    )


def _point_metadata(point: OperatingPoint) -> dict[str, Scalar]:
    return {
        "kind": point.kind.value,
        "k": point.k,
        "gamma": point.gamma,
        "f": point.f,
        "beta": point.beta,
        "dd": point.dd,
        "beta_max": point.beta_max,
        "dd_max": point.dd_max,
    }


def rho_table(result: SimulationResult) -> ResultTable:
    """Return the per-link table of one run; the summary carries Min/Avg ρ."""
    task = result.task
    metadata: dict[str, Scalar] = {
        "kind": task.kind.value,
        "k": task.k,
        "gamma": task.gamma,
        "beta": task.beta,
        "dd": task.dd,
        "eta": task.eta,
        "nodes": task.nodes,
        "seed": task.seed,
        "margin": task.margin,
        "threshold": result.threshold,
        "power": result.power,
        "rng": RNG_IDENTITY,
    }
    if result.report is None:
        return ResultTable(name="rho", columns=RHO_COLUMNS, metadata=metadata, summary={"feasible": False})
    report = result.report
    return ResultTable(
        name="rho",
        columns=RHO_COLUMNS,
        rows=tuple(record.to_row() for record in report.records()),
        metadata=metadata,
        summary={"feasible": True, **report.summary()},
    )


def seeds_table(point: OperatingPoint, results: Sequence[SimulationResult]) -> ResultTable:
    """Return one row per seed plus the pooled summary."""
    rows: list[tuple[Scalar, ...]] = []
    for result in results:
        report = result.report
        if report is None:
            rows.append((result.task.seed, 0, 0, None, None, None, None))
            continue
        summary = report.summary()
        rows.append(
            (
                result.task.seed,
                summary["count"],
                summary["violations"],
                summary["min_rho"],
                summary["avg_rho"],
                summary["avg_over_min"],
                result.power,
            ),
        )
    pooled = aggregate(results)
    return ResultTable(
        name="simulation",
        columns=("seed", "count", "violations", "min_rho", "avg_rho", "avg_over_min", "power"),
        rows=tuple(rows),
        metadata={**_point_metadata(point), "nodes": results[0].task.nodes if results else None, "rng": RNG_IDENTITY},
        summary={
            "feasible": point.feasible and all(r.feasible for r in results),
            "min_rho": pooled.min_rho,
            "avg_rho": pooled.avg_rho,
            "avg_over_min": pooled.avg_over_min,
            "violations": pooled.violations,
            "count": pooled.count,
        },
    )


def sweep_table(over: str, points: Sequence[SweepPoint], *, metadata: dict[str, Scalar] | None = None) -> ResultTable:
    """Return one row per sweep point, keyed by the swept parameter ``over``."""
    rows = tuple(
        (
            int(p.value) if over in {"k", "nodes"} else p.value,
            p.beta,
            p.dd,
            p.power,
            p.stats.min_rho,
            p.stats.avg_rho,
            p.stats.avg_over_min,
            p.stats.violations,
            p.stats.count,
        )
        for p in points
    )
    return ResultTable(
        name=f"sweep-{over}",
        columns=(over, "beta", "dd", "power", "min_rho", "avg_rho", "avg_over_min", "violations", "count"),
        rows=rows,
        metadata={"over": over, "rng": RNG_IDENTITY, **(metadata or {})},
    )


def positions_table(dep: Deployment) -> ResultTable:
    """Return the ``x,y,px,py`` table of a deployment."""
    return ResultTable(
        name="positions",
        columns=POSITION_COLUMNS,
        rows=tuple(dep.to_rows()),
        metadata={
            "kind": dep.kind.value,
            "dd_target": dep.dd_target,
            "nominal_spacing": dep.nominal_spacing,
            "seed": dep.seed,
            "rng": RNG_IDENTITY,
        },
    )
