"""Performance benchmarks for latticetdma core modules.

These benchmarks target the pure-computation paths of the lattice,
scheduler, interference, SINR and deployment modules to track performance
over time.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest
from rich.console import Console

from latticetdma.constants import LatticeKind
from latticetdma.deployment import evaluate, generate, operating_point
from latticetdma.exporter import CSVExporter
from latticetdma.interference import build_interference_graph, clique_report
from latticetdma.lattice import LatticeCoord, NetworkExtent, graph_distance
from latticetdma.reports import schedule_table
from latticetdma.scheduler import Schedule, build_schedule, verify_schedule
from latticetdma.sinr import SinrParams, exact_regular_interference, feasibility_grid, power_threshold

if TYPE_CHECKING:
    from pytest_codspeed.plugin import BenchmarkFixture


@pytest.fixture
def box() -> NetworkExtent:
    return NetworkExtent.box(30, 30)


@pytest.fixture
def hex_schedule(box: NetworkExtent) -> Schedule:
    return build_schedule(LatticeKind.HEXAGONAL, 2, box)


@pytest.mark.benchmark(group="lattice")
def test_bench_graph_distance(benchmark: BenchmarkFixture) -> None:
    a = LatticeCoord(-17, 4)
    b = LatticeCoord(23, -31)
    benchmark(lambda: [graph_distance(kind, a, b) for kind in LatticeKind])


@pytest.mark.benchmark(group="scheduler")
def test_bench_build_schedule(benchmark: BenchmarkFixture, box: NetworkExtent) -> None:
    benchmark(build_schedule, LatticeKind.SQUARE, 3, box)


@pytest.mark.benchmark(group="scheduler")
def test_bench_verify_schedule(benchmark: BenchmarkFixture, hex_schedule: Schedule, box: NetworkExtent) -> None:
    benchmark(verify_schedule, hex_schedule, box)


@pytest.mark.benchmark(group="interference")
def test_bench_interference_graph(benchmark: BenchmarkFixture) -> None:
    benchmark(build_interference_graph, LatticeKind.HEXAGONAL, 2, NetworkExtent.box(12, 12))


@pytest.mark.benchmark(group="interference")
def test_bench_clique_report(benchmark: BenchmarkFixture) -> None:
    benchmark(clique_report, LatticeKind.SQUARE, 3)


@pytest.mark.benchmark(group="sinr")
def test_bench_exact_interference(benchmark: BenchmarkFixture) -> None:
    params = SinrParams(beta=1.0, gamma=3.0, k=2)
    benchmark(exact_regular_interference, LatticeKind.HEXAGONAL, params, 200)


@pytest.mark.benchmark(group="sinr")
def test_bench_feasibility_grid(benchmark: BenchmarkFixture) -> None:
    gammas = [2.5 + 0.5 * i for i in range(8)]
    benchmark(feasibility_grid, LatticeKind.SQUARE, 1.0, gammas, range(1, 11))


@pytest.mark.benchmark(group="sinr")
def test_bench_power_threshold(benchmark: BenchmarkFixture) -> None:
    params = SinrParams(beta=2.0, gamma=4.0, k=2, d_min=0.8, d_max=1.0)
    benchmark(power_threshold, LatticeKind.HEXAGONAL, params)


@pytest.mark.benchmark(group="deployment")
def test_bench_generate(benchmark: BenchmarkFixture, box: NetworkExtent) -> None:
    point = operating_point(LatticeKind.HEXAGONAL, 4.0, 2, 0.5)
    benchmark(generate, LatticeKind.HEXAGONAL, box, point.dd, 0)


@pytest.mark.benchmark(group="deployment")
def test_bench_evaluate(benchmark: BenchmarkFixture, hex_schedule: Schedule, box: NetworkExtent) -> None:
    point = operating_point(LatticeKind.HEXAGONAL, 4.0, 2, 0.5)
    dep = generate(LatticeKind.HEXAGONAL, box, point.dd, 0)
    params = SinrParams(beta=point.beta, gamma=4.0, k=2, power=1.0)
    benchmark(evaluate, dep, hex_schedule, params)


@pytest.mark.benchmark(group="exporter")
def test_bench_csv_render(benchmark: BenchmarkFixture, hex_schedule: Schedule) -> None:
    exporter = CSVExporter(Console(record=True))
    table = schedule_table(hex_schedule, extent=(30, 30))
    benchmark(exporter.render, table)
