import math

import pytest

from latticetdma.constants import LatticeKind
from latticetdma.errors import DomainError, InvalidArgumentError, UndefinedGainError
from latticetdma.sinr import (
    SinrParams,
    exact_regular_interference,
    feasibility,
    feasibility_grid,
    hex_interference_bound,
    interference_bound,
    interference_tail_bound,
    min_signal,
    power_threshold,
    sinr_at,
    square_alpha,
    square_interference_bound,
)

HEX = LatticeKind.HEXAGONAL
SQUARE = LatticeKind.SQUARE


class TestSinrParams:
    """Parameter validation and unit changes."""

    @pytest.mark.parametrize(
        ("overrides", "match"),
        [
            ({"beta": 0.0}, "beta"),
            ({"gamma": -1.0}, "gamma"),
            ({"eta": -0.1}, "eta"),
            ({"k": 0}, "k must be"),
            ({"d_min": 2.0, "d_max": 1.0}, "0 < d <= D"),
            ({"power": -1.0}, "power"),
        ],
    )
    def test_rejects_invalid_values(self, overrides: dict[str, float], match: str) -> None:
        values: dict[str, float] = {"beta": 1.0, "gamma": 3.0, **overrides}
        with pytest.raises(InvalidArgumentError, match=match):
            SinrParams(**values)  # type: ignore[arg-type]

    def test_derived_lengths(self) -> None:
        params = SinrParams(beta=1.0, gamma=3.0, k=2, d_min=0.5, d_max=1.0)
        assert params.dd_ratio == 2.0
        assert params.reuse_distance == 1.5

    def test_scaled_keeps_sinr(self) -> None:
        params = SinrParams(beta=1.0, gamma=3.5, eta=0.2, power=2.0)
        scaled = params.scaled(3.0)
        before = sinr_at((0.0, 0.0), (1.0, 0.0), [(4.0, 1.0), (-2.0, 3.0)], params)
        after = sinr_at((0.0, 0.0), (3.0, 0.0), [(12.0, 3.0), (-6.0, 9.0)], scaled)
        assert after == pytest.approx(before)

    def test_scaled_rejects_non_positive_factor(self) -> None:
        with pytest.raises(InvalidArgumentError):
            SinrParams(beta=1.0, gamma=3.0).scaled(0.0)


class TestSinrAt:
    """Direct SINR evaluation."""

    def test_single_interferer_without_noise(self) -> None:
        params = SinrParams(beta=1.0, gamma=2.0, eta=0.0)
        assert sinr_at((0.0, 0.0), (1.0, 0.0), [(3.0, 0.0)], params) == pytest.approx(9.0)

    def test_noise_added_to_interference(self) -> None:
        params = SinrParams(beta=1.0, gamma=2.0, eta=1.0)
        assert sinr_at((0.0, 0.0), (1.0, 0.0), [(3.0, 0.0)], params) == pytest.approx(0.9)

    def test_no_interference_no_noise_is_infinite(self) -> None:
        params = SinrParams(beta=1.0, gamma=3.0, eta=0.0)
        assert math.isinf(sinr_at((0.0, 0.0), (1.0, 0.0), [], params))

    def test_coincident_sender(self) -> None:
        params = SinrParams(beta=1.0, gamma=3.0)
        with pytest.raises(UndefinedGainError, match="Sender"):
            sinr_at((1.0, 1.0), (1.0, 1.0), [], params)

    def test_coincident_interferer(self) -> None:
        params = SinrParams(beta=1.0, gamma=3.0)
        with pytest.raises(UndefinedGainError, match="Interferer"):
            sinr_at((0.0, 0.0), (1.0, 0.0), [(0.0, 0.0)], params)

    def test_min_signal(self) -> None:
        params = SinrParams(beta=1.0, gamma=3.0, d_min=1.0, d_max=2.0, power=16.0)
        assert min_signal(params) == pytest.approx(2.0)


class TestInterferenceBounds:
    """Closed-form interference bounds."""

    def test_hex_bound_value(self) -> None:
        params = SinrParams(beta=1.0, gamma=4.0, k=2)
        assert hex_interference_bound(params) == pytest.approx(16 / 81)

    def test_square_alpha_values(self) -> None:
        alpha = square_alpha(3, 3.0)
        assert alpha.nu == pytest.approx(4 * math.sqrt(2) / 3)
        assert alpha.phi == pytest.approx(1.4881, abs=1e-4)
        assert alpha.alpha == pytest.approx(10.0, abs=1e-3)

    def test_square_alpha_needs_positive_k(self) -> None:
        with pytest.raises(DomainError, match="k=0"):
            square_alpha(0, 3.0)

    @pytest.mark.parametrize("gamma", [2.0, 1.5])
    def test_bounds_need_gamma_above_two(self, kind: LatticeKind, gamma: float) -> None:
        with pytest.raises(DomainError, match="gamma > 2"):
            interference_bound(kind, SinrParams(beta=1.0, gamma=gamma))

    def test_dispatch(self) -> None:
        params = SinrParams(beta=1.0, gamma=3.0, k=3)
        assert interference_bound(HEX, params) == hex_interference_bound(params)
        assert interference_bound(SQUARE, params) == square_interference_bound(params)

    def test_bound_scales_with_power(self, kind: LatticeKind) -> None:
        params = SinrParams(beta=1.0, gamma=3.0, k=2)
        doubled = params.with_power(2.0)
        assert interference_bound(kind, doubled) == pytest.approx(2 * interference_bound(kind, params))


class TestExactRegularInterference:
    """Ring-by-ring interference of regular deployments."""

    def test_one_ring_with_offset(self) -> None:
        params = SinrParams(beta=1.0, gamma=4.0, k=2)
        assert exact_regular_interference(HEX, params, 1) == pytest.approx(0.375)

    def test_one_ring_without_offset(self) -> None:
        params = SinrParams(beta=1.0, gamma=4.0, k=1)
        assert exact_regular_interference(HEX, params, 1, receiver_offset=False) == pytest.approx(0.375)

    @pytest.mark.parametrize(("gamma", "k"), [(3.0, 1), (4.0, 2), (3.5, 3), (5.0, 5)])
    def test_bound_is_sound(self, kind: LatticeKind, gamma: float, k: int) -> None:
        params = SinrParams(beta=1.0, gamma=gamma, k=k)
        exact = exact_regular_interference(kind, params, 200, receiver_offset=False)
        assert exact <= interference_bound(kind, params)

    def test_more_rings_add_interference(self, kind: LatticeKind) -> None:
        params = SinrParams(beta=1.0, gamma=3.0, k=2)
        assert exact_regular_interference(kind, params, 10) < exact_regular_interference(kind, params, 20)

    def test_tail_bound_covers_truncation(self, kind: LatticeKind) -> None:
        params = SinrParams(beta=1.0, gamma=3.0, k=2)
        head = exact_regular_interference(kind, params, 30)
        tail = interference_tail_bound(kind, params, 30)
        assert head + tail >= exact_regular_interference(kind, params, 300)

    def test_rejects_zero_rings(self) -> None:
        with pytest.raises(InvalidArgumentError, match="rings"):
            exact_regular_interference(HEX, SinrParams(beta=1.0, gamma=3.0), 0)


class TestPowerThreshold:
    """Minimum power for a feasible configuration."""

    def test_hex_value(self) -> None:
        params = SinrParams(beta=1.0, gamma=4.0, k=2)
        assert power_threshold(HEX, params) == pytest.approx(81 / 65)

    def test_infeasible_returns_none(self) -> None:
        params = SinrParams(beta=10.0, gamma=4.0, k=2)
        assert power_threshold(HEX, params) is None

    def test_noise_free_needs_no_power(self, kind: LatticeKind) -> None:
        params = SinrParams(beta=0.5, gamma=4.0, eta=0.0, k=3)
        assert power_threshold(kind, params) == 0.0

    def test_power_above_threshold_meets_beta(self) -> None:
        params = SinrParams(beta=1.0, gamma=4.0, k=2)
        threshold = power_threshold(HEX, params)
        assert threshold is not None
        powered = params.with_power(threshold * 1.01)
        interference = hex_interference_bound(powered)
        assert min_signal(powered) / (interference + powered.eta) > params.beta

    def test_decreases_with_k(self, kind: LatticeKind) -> None:
        thresholds = [
            power_threshold(kind, SinrParams(beta=0.1, gamma=4.0, k=k, d_min=1 / 1.1, d_max=1.0)) for k in range(2, 9)
        ]
        assert None not in thresholds
        assert all(after < before for before, after in zip(thresholds, thresholds[1:]))  # type: ignore[operator]


class TestFeasibility:
    """Region boundaries."""

    def test_hex_region(self) -> None:
        region = feasibility(HEX, beta=1.0, gamma=4.0, k=2)
        assert region.dd_max == pytest.approx(1.5)
        assert region.beta_max == pytest.approx(81 / 16)
        assert region.feasible

    def test_square_region(self) -> None:
        region = feasibility(SQUARE, beta=0.5, gamma=3.0, k=3)
        assert region.beta_max == pytest.approx(0.8, abs=1e-3)
        assert region.dd_max == pytest.approx(4 * (1 / 40) ** (1 / 3), rel=1e-3)

    def test_infeasible_region(self) -> None:
        region = feasibility(HEX, beta=1.0, gamma=2.5, k=1)
        assert not region.feasible
        assert not region.admits(1.0)

    def test_admits_is_strict(self) -> None:
        region = feasibility(HEX, beta=1.0, gamma=4.0, k=2)
        assert region.admits(1.0)
        assert region.admits(1.49)
        assert not region.admits(region.dd_max)
        assert not region.admits(0.5)

    def test_p_min_at_regular_point(self) -> None:
        region = feasibility(HEX, beta=1.0, gamma=4.0, k=2, dd=1.0)
        assert region.p_min == pytest.approx(81 / 65)

    def test_p_min_outside_region(self) -> None:
        region = feasibility(HEX, beta=1.0, gamma=4.0, k=2, dd=2.0)
        assert region.p_min is None

    def test_boundary_matches_power_threshold(self, kind: LatticeKind) -> None:
        region = feasibility(kind, beta=1.0, gamma=4.0, k=3)
        inside = SinrParams(beta=1.0, gamma=4.0, k=3, d_min=1.0, d_max=region.dd_max * 0.99)
        outside = SinrParams(beta=1.0, gamma=4.0, k=3, d_min=1.0, d_max=region.dd_max * 1.01)
        assert power_threshold(kind, inside) is not None
        assert power_threshold(kind, outside) is None

    @pytest.mark.parametrize(("beta", "gamma", "k"), [(1.0, 2.0, 2), (0.0, 3.0, 2), (1.0, 3.0, 0)])
    def test_invalid_arguments(self, beta: float, gamma: float, k: int) -> None:
        with pytest.raises(InvalidArgumentError):
            feasibility(HEX, beta=beta, gamma=gamma, k=k)

    def test_larger_k_widens_region(self, kind: LatticeKind) -> None:
        small = feasibility(kind, beta=1.0, gamma=3.0, k=2)
        large = feasibility(kind, beta=1.0, gamma=3.0, k=5)
        assert large.dd_max > small.dd_max
        assert large.beta_max > small.beta_max

    def test_dd_max_decreases_with_beta(self, kind: LatticeKind) -> None:
        bounds = [feasibility(kind, beta=beta, gamma=3.5, k=3).dd_max for beta in (0.05, 0.1, 0.5, 1.0, 2.0)]
        assert all(after < before for before, after in zip(bounds, bounds[1:]))

    def test_grid_is_gamma_major(self) -> None:
        grid = feasibility_grid(SQUARE, 1.0, [3.0, 4.0], [1, 2, 3])
        assert [(r.gamma, r.k) for r in grid] == [(3.0, 1), (3.0, 2), (3.0, 3), (4.0, 1), (4.0, 2), (4.0, 3)]
