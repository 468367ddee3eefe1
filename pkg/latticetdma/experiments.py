"""Simulation pipeline and parameter sweeps.

A simulation point goes operating point → SINR parameters (``D = 1``,
``d = 1/(D/d)``) → transmit power ``threshold·(1+ε)`` → deployment → schedule
→ evaluation. Sweeps repeat the pipeline over one varying parameter and, with
``jobs > 1``, fan the independent points out over a process pool. Results
come back in input order, so the output does not depend on ``jobs``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .constants import (
    DEFAULT_ETA,
    DEFAULT_K_SWEEP_F,
    DEFAULT_K_SWEEP_REFERENCE_K,
    DEFAULT_MAX_NEIGHBOR_DISTANCE,
    DEFAULT_NODE_COUNT,
    DEFAULT_POWER_MARGIN,
    DEFAULT_SEED,
    LatticeKind,
)
from .deployment import OperatingPoint, RhoReport, evaluate, generate, operating_point
from .errors import InvalidArgumentError
from .lattice import NetworkExtent
from .scheduler import build_schedule
from .sinr import SinrParams, power_threshold

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SimulationTask:
    """Inputs of one pipeline run at a fixed threshold and irregularity.

    Attributes:
        kind: Lattice topology.
        k: Interference parameter.
        gamma: Path-loss exponent.
        beta: SINR threshold.
        dd: Irregularity ``D/d``.
        nodes: Network size.
        seed: Deployment seed.
        eta: Noise power.
        margin: Relative power margin ``ε`` above the threshold.

    """

    kind: LatticeKind
    k: int
    gamma: float
    beta: float
    dd: float
    nodes: int = DEFAULT_NODE_COUNT
    seed: int = DEFAULT_SEED
    eta: float = DEFAULT_ETA
    margin: float = DEFAULT_POWER_MARGIN


@dataclass(frozen=True, slots=True)
class SimulationResult:
    """Outcome of one pipeline run.

    Attributes:
        task: Inputs of the run.
        threshold: Analytical power threshold, ``None`` when infeasible.
        power: Transmit power used, ``None`` when infeasible.
        report: Per-link SINR report, ``None`` when infeasible.

    """

    task: SimulationTask
    threshold: float | None
    power: float | None
    report: RhoReport | None

    @property
    def feasible(self) -> bool:
        """Return ``True`` when the run produced a report."""
        return self.report is not None


def run_task(task: SimulationTask) -> SimulationResult:
    """Run the deployment and evaluation pipeline for one task.

    With ``η = 0`` the threshold is zero and SINR does not depend on power,
    so a unit power is used.
    """
    if task.beta <= 0 or task.dd < 1.0:
        logger.warning("Skipping degenerate point beta=%g D/d=%g", task.beta, task.dd)
        return SimulationResult(task=task, threshold=None, power=None, report=None)
    params = SinrParams(
        beta=task.beta,
        gamma=task.gamma,
        eta=task.eta,
        k=task.k,
        d_min=DEFAULT_MAX_NEIGHBOR_DISTANCE / task.dd,
        d_max=DEFAULT_MAX_NEIGHBOR_DISTANCE,
    )
    threshold = power_threshold(task.kind, params)
    if threshold is None:
        logger.warning(
            "Infeasible point: %s k=%d gamma=%g beta=%g D/d=%g",
            task.kind.value,
            task.k,
            task.gamma,
            task.beta,
            task.dd,
        )
        return SimulationResult(task=task, threshold=None, power=None, report=None)
    power = threshold * (1.0 + task.margin) if threshold > 0 else 1.0
    extent = NetworkExtent.for_node_count(task.nodes)
    deployment = generate(task.kind, extent, task.dd, task.seed)
    schedule = build_schedule(task.kind, task.k, extent)
    report = evaluate(deployment, schedule, params.with_power(power))
    logger.info(
        "%s k=%d nodes=%d seed=%d: min rho %s",
        task.kind.value,
        task.k,
        task.nodes,
        task.seed,
        report.min_rho,
    )
    return SimulationResult(task=task, threshold=threshold, power=power, report=report)


def run_tasks(tasks: Sequence[SimulationTask], *, jobs: int = 1) -> list[SimulationResult]:
    """Run tasks in order, in a process pool when ``jobs > 1``.

    Raises:
        InvalidArgumentError: If ``jobs < 1``.

    """
    if jobs < 1:
        msg = f"jobs must be >= 1, got {jobs}"
        raise InvalidArgumentError(msg)
    if jobs == 1 or len(tasks) <= 1:
        return [run_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_task, tasks))


def simulate_point(
    kind: LatticeKind,
    k: int,
    gamma: float,
    f: float,
    *,
    nodes: int = DEFAULT_NODE_COUNT,
    seed: int = DEFAULT_SEED,
    eta: float = DEFAULT_ETA,
    margin: float = DEFAULT_POWER_MARGIN,
) -> SimulationResult:
    """Simulate the operating point a fraction ``f`` towards the region boundary."""
    point = operating_point(kind, gamma, k, f)
    return run_task(_task_at(point, nodes=nodes, seed=seed, eta=eta, margin=margin))


def _task_at(point: OperatingPoint, *, nodes: int, seed: int, eta: float, margin: float) -> SimulationTask:
    return SimulationTask(
        kind=point.kind,
        k=point.k,
        gamma=point.gamma,
        beta=point.beta,
        dd=point.dd,
        nodes=nodes,
        seed=seed,
        eta=eta,
        margin=margin,
    )


def simulate_seeds(
    kind: LatticeKind,
    k: int,
    gamma: float,
    f: float,
    seeds: Sequence[int],
    *,
    nodes: int = DEFAULT_NODE_COUNT,
    eta: float = DEFAULT_ETA,
    margin: float = DEFAULT_POWER_MARGIN,
    jobs: int = 1,
) -> tuple[OperatingPoint, list[SimulationResult]]:
    """Simulate one operating point once per seed."""
    point = operating_point(kind, gamma, k, f)
    tasks = [_task_at(point, nodes=nodes, seed=seed, eta=eta, margin=margin) for seed in seeds]
    return point, run_tasks(tasks, jobs=jobs)


@dataclass(frozen=True, slots=True)
class AggregateRho:
    """ρ statistics pooled over the seeds of one sweep point.

    Attributes:
        min_rho: Smallest ρ over every link of every seed.
        avg_rho: Mean ρ over every link of every seed.
        violations: Links with ρ < 1, summed over seeds.
        count: Links evaluated, summed over seeds.

    """

    min_rho: float | None
    avg_rho: float | None
    violations: int
    count: int

    @property
    def avg_over_min(self) -> float | None:
        """``avg_rho / min_rho`` when both are defined."""
        if self.min_rho is None or self.avg_rho is None or self.min_rho == 0:
            return None
        return self.avg_rho / self.min_rho


def aggregate(results: Sequence[SimulationResult]) -> AggregateRho:
    """Pool the reports of several runs; infeasible runs contribute nothing."""
    reports = [r.report for r in results if r.report is not None and not r.report.is_empty]
    if not reports:
        return AggregateRho(min_rho=None, avg_rho=None, violations=0, count=0)
    count = sum(report.count for report in reports)
    total = math.fsum(value for report in reports for value in report.rho.tolist())
    return AggregateRho(
        min_rho=min(float(report.rho.min()) for report in reports),
        avg_rho=total / count,
        violations=sum(report.violations for report in reports),
        count=count,
    )


@dataclass(frozen=True, slots=True)
class SweepPoint:
    """One row of a sweep.

    Attributes:
        value: Value of the swept parameter.
        beta: SINR threshold used.
        dd: Irregularity used.
        power: Transmit power, ``None`` when infeasible.
        stats: Pooled ρ statistics.

    """

    value: float
    beta: float
    dd: float
    power: float | None
    stats: AggregateRho


def _sweep(
    values: Sequence[float],
    tasks_for: Callable[[float], list[SimulationTask]],
    jobs: int,
) -> list[SweepPoint]:
    batches = [tasks_for(value) for value in values]
    flat = [task for batch in batches for task in batch]
    results = iter(run_tasks(flat, jobs=jobs))
    points: list[SweepPoint] = []
    for value, batch in zip(values, batches):
        chunk = [next(results) for _ in batch]
        power = next((r.power for r in chunk if r.power is not None), None)
        first = batch[0]
        points.append(SweepPoint(value=value, beta=first.beta, dd=first.dd, power=power, stats=aggregate(chunk)))
        logger.debug("sweep point %g done", value)
    return points


def k_sweep(
    kind: LatticeKind,
    gamma: float,
    ks: Sequence[int],
    *,
    f: float = DEFAULT_K_SWEEP_F,
    k_ref: int = DEFAULT_K_SWEEP_REFERENCE_K,
    nodes: int = DEFAULT_NODE_COUNT,
    seeds: Sequence[int] = (DEFAULT_SEED,),
    eta: float = DEFAULT_ETA,
    margin: float = DEFAULT_POWER_MARGIN,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Vary ``k`` at the fixed operating point chosen for ``k_ref``.

    The threshold and irregularity stay those of ``operating_point(k_ref, f)``
    so that only the frame changes; larger ``k`` needs less power.
    """
    reference = operating_point(kind, gamma, k_ref, f)

    def tasks_for(k: float) -> list[SimulationTask]:
        return [
            SimulationTask(kind, int(k), gamma, reference.beta, reference.dd, nodes, seed, eta, margin)
            for seed in seeds
        ]

    return _sweep([float(k) for k in ks], tasks_for, jobs)


def f_sweep(
    kind: LatticeKind,
    k: int,
    gamma: float,
    fs: Sequence[float],
    *,
    nodes: int = DEFAULT_NODE_COUNT,
    seeds: Sequence[int] = (DEFAULT_SEED,),
    eta: float = DEFAULT_ETA,
    margin: float = DEFAULT_POWER_MARGIN,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Vary the operating fraction ``f`` at fixed ``k`` and ``γ``."""

    def tasks_for(f: float) -> list[SimulationTask]:
        point = operating_point(kind, gamma, k, f)
        return [_task_at(point, nodes=nodes, seed=seed, eta=eta, margin=margin) for seed in seeds]

    return _sweep(list(fs), tasks_for, jobs)


def size_sweep(
    kind: LatticeKind,
    k: int,
    gamma: float,
    f: float,
    node_counts: Sequence[int],
    *,
    seeds: Sequence[int] = (DEFAULT_SEED,),
    eta: float = DEFAULT_ETA,
    margin: float = DEFAULT_POWER_MARGIN,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Vary the network size at a fixed operating point."""
    point = operating_point(kind, gamma, k, f)

    def tasks_for(nodes: float) -> list[SimulationTask]:
        return [_task_at(point, nodes=int(nodes), seed=seed, eta=eta, margin=margin) for seed in seeds]

    return _sweep([float(n) for n in node_counts], tasks_for, jobs)
