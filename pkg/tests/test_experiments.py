import pytest

from latticetdma.constants import LatticeKind
from latticetdma.errors import InvalidArgumentError
from latticetdma.experiments import (
    SimulationTask,
    aggregate,
    f_sweep,
    k_sweep,
    run_task,
    run_tasks,
    simulate_point,
    simulate_seeds,
    size_sweep,
)

HEX = LatticeKind.HEXAGONAL
SQUARE = LatticeKind.SQUARE


class TestRunTask:
    """Single pipeline runs."""

    def test_feasible_point_meets_threshold(self, kind: LatticeKind) -> None:
        result = simulate_point(kind, 2, 4.0, 0.5, nodes=400, seed=1)
        assert result.feasible
        assert result.report is not None
        assert result.threshold is not None
        assert result.power == pytest.approx(result.threshold * 1.001)
        assert result.report.min_rho is not None
        assert result.report.min_rho >= 1.0

    def test_degenerate_point_is_skipped(self, caplog: pytest.LogCaptureFixture) -> None:
        result = run_task(SimulationTask(kind=HEX, k=2, gamma=3.0, beta=0.0, dd=1.0, nodes=50))
        assert not result.feasible
        assert result.power is None
        assert "degenerate" in caplog.text

    def test_infeasible_point(self, caplog: pytest.LogCaptureFixture) -> None:
        result = run_task(SimulationTask(kind=SQUARE, k=1, gamma=3.0, beta=50.0, dd=1.5, nodes=50))
        assert result.threshold is None
        assert result.report is None
        assert "Infeasible point" in caplog.text

    def test_noise_free_uses_unit_power(self) -> None:
        result = run_task(SimulationTask(kind=HEX, k=2, gamma=4.0, beta=1.0, dd=1.1, nodes=100, eta=0.0))
        assert result.threshold == 0.0
        assert result.power == 1.0

    def test_identical_inputs_give_identical_reports(self) -> None:
        task = SimulationTask(kind=SQUARE, k=3, gamma=3.5, beta=0.5, dd=1.2, nodes=300, seed=9)
        first, second = run_task(task), run_task(task)
        assert first.report is not None
        assert second.report is not None
        assert first.report.summary() == second.report.summary()


class TestRunTasks:
    """Ordered execution, optionally in a process pool."""

    def test_pool_preserves_order(self) -> None:
        tasks = [SimulationTask(kind=HEX, k=2, gamma=4.0, beta=1.0, dd=1.1, nodes=120, seed=s) for s in range(3)]
        serial = run_tasks(tasks, jobs=1)
        parallel = run_tasks(tasks, jobs=2)
        assert [r.task.seed for r in parallel] == [0, 1, 2]
        assert [r.report.summary() for r in parallel if r.report] == [r.report.summary() for r in serial if r.report]

    def test_rejects_zero_jobs(self) -> None:
        with pytest.raises(InvalidArgumentError, match="jobs"):
            run_tasks([], jobs=0)

    def test_empty_task_list(self) -> None:
        assert run_tasks([], jobs=4) == []


class TestAggregate:
    """Pooling across seeds."""

    def test_pools_every_link(self) -> None:
        point, results = simulate_seeds(HEX, 2, 4.0, 0.5, [0, 1], nodes=150)
        stats = aggregate(results)
        reports = [r.report for r in results if r.report is not None]
        assert point.feasible
        assert stats.count == sum(r.count for r in reports)
        assert stats.min_rho == min(r.min_rho for r in reports if r.min_rho is not None)
        assert stats.avg_over_min is not None
        assert stats.avg_over_min >= 1.0

    def test_nothing_to_pool(self) -> None:
        stats = aggregate([])
        assert stats.min_rho is None
        assert stats.avg_rho is None
        assert stats.avg_over_min is None
        assert stats.count == 0


class TestSweeps:
    """Parameter sweeps."""

    def test_k_sweep_power_decreases(self) -> None:
        points = k_sweep(HEX, 3.0, [2, 3, 4], f=0.9, nodes=200)
        assert [p.value for p in points] == [2.0, 3.0, 4.0]
        powers = [p.power for p in points]
        assert None not in powers
        assert powers == sorted(powers, reverse=True)  # type: ignore[type-var]
        assert len({(p.beta, p.dd) for p in points}) == 1

    def test_f_sweep_moves_operating_point(self) -> None:
        gamma = 4.0
        points = f_sweep(SQUARE, 2, gamma, [0.25, 0.5], nodes=150)
        assert points[0].beta < points[1].beta
        for point in points:
            f = point.value
            assert point.dd == pytest.approx(1.0 + f ** (1.0 - 1.0 / gamma) - f)
        assert all(p.stats.violations == 0 for p in points)

    def test_f_sweep_irregularity_returns_to_one(self) -> None:
        points = f_sweep(HEX, 2, 4.0, [0.05, 0.3, 0.95], nodes=50)
        dds = [p.dd for p in points]
        assert dds[1] > dds[0]
        assert dds[1] > dds[2]
        assert dds[2] == pytest.approx(1.0, abs=0.02)

    def test_f_sweep_degenerate_fraction(self) -> None:
        points = f_sweep(HEX, 2, 4.0, [0.0], nodes=50)
        assert points[0].power is None
        assert points[0].stats.count == 0

    def test_size_sweep_counts_links(self) -> None:
        points = size_sweep(HEX, 2, 4.0, 0.5, [50, 200], seeds=[0, 1])
        assert [int(p.value) for p in points] == [50, 200]
        assert points[0].stats.count < points[1].stats.count
