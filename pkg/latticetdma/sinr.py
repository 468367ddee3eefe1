"""SINR criterion, interference bounds, power thresholds and feasibility regions.

All quantities use deterministic polynomial path loss ``gain = distance**-γ``
and a uniform transmit power ``P``. Neighbor distances in a deployment lie in
``[d, D]``; concurrent transmitters of one slot are at least ``l = (k+1)·d``
apart, which is what the closed-form interference bounds build on.

Infeasible configurations are values, not errors: :func:`power_threshold`
returns ``None`` and :class:`FeasibilityRegion` carries a ``feasible`` flag.

Examples:
    >>> region = feasibility(LatticeKind.HEXAGONAL, beta=1.0, gamma=4.0, k=2)
    >>> round(region.dd_max, 12), region.beta_max
    (1.5, 5.0625)

"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from .constants import DEFAULT_ETA, DEFAULT_MAX_NEIGHBOR_DISTANCE, MIN_PATH_LOSS_EXPONENT, LatticeKind
from .errors import ConfigurationError, DomainError, InvalidArgumentError, UndefinedGainError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

Point = tuple[float, float]

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
# Threshold denominators within this distance of zero are on the region boundary.
_BOUNDARY_TOLERANCE = 1e-12


@dataclass(frozen=True, slots=True)
class SinrParams:
    """Parameters of the SINR analysis.

    Attributes:
        beta: SINR threshold ``β`` (> 0).
        gamma: Path-loss exponent ``γ`` (> 0; the closed-form bounds need > 2).
        eta: Noise power ``η`` (>= 0).
        k: Interference parameter (>= 1).
        d_min: Minimum neighbor distance ``d`` (> 0).
        d_max: Maximum neighbor distance ``D`` (>= ``d_min``).
        power: Uniform transmit power ``P`` (>= 0).

    """

    beta: float
    gamma: float
    eta: float = DEFAULT_ETA
    k: int = 1
    d_min: float = DEFAULT_MAX_NEIGHBOR_DISTANCE
    d_max: float = DEFAULT_MAX_NEIGHBOR_DISTANCE
    power: float = 1.0

    def __post_init__(self) -> None:
        if self.beta <= 0:
            msg = f"SINR threshold beta must be positive, got {self.beta}"
            raise InvalidArgumentError(msg)
        if self.gamma <= 0:
            msg = f"Path-loss exponent gamma must be positive, got {self.gamma}"
            raise InvalidArgumentError(msg)
        if self.eta < 0:
            msg = f"Noise power eta must be non-negative, got {self.eta}"
            raise InvalidArgumentError(msg)
        if self.k < 1:
            msg = f"Interference parameter k must be >= 1, got {self.k}"
            raise InvalidArgumentError(msg)
        if not 0 < self.d_min <= self.d_max:
            msg = f"Neighbor distances must satisfy 0 < d <= D, got d={self.d_min}, D={self.d_max}"
            raise InvalidArgumentError(msg)
        if self.power < 0:
            msg = f"Transmit power must be non-negative, got {self.power}"
            raise InvalidArgumentError(msg)

    @property
    def dd_ratio(self) -> float:
        """Irregularity ``D/d``."""
        return self.d_max / self.d_min

    @property
    def reuse_distance(self) -> float:
        """Minimum distance ``l = (k+1)·d`` between concurrent transmitters."""
        return (self.k + 1) * self.d_min

    def with_power(self, power: float) -> SinrParams:
        """Return a copy with a different transmit power."""
        return replace(self, power=power)

    def scaled(self, factor: float) -> SinrParams:
        """Scale lengths by ``factor`` and power by ``factor**γ``.

        Every SINR value and both region boundaries are invariant under this
        change of units.
        """
        if factor <= 0:
            msg = f"Scale factor must be positive, got {factor}"
            raise InvalidArgumentError(msg)
        return replace(
            self,
            d_min=self.d_min * factor,
            d_max=self.d_max * factor,
            power=self.power * factor**self.gamma,
        )


@dataclass(frozen=True, slots=True)
class SquareAlpha:
    """Geometry constants of the square-grid interference bound.

    Attributes:
        nu: Inverse of the worst relative distance at the middle of a ring side.
        phi: Inverse of the worst relative distance near a ring corner.
        alpha: ``nu**γ + phi**γ``.

    """

    nu: float
    phi: float
    alpha: float


@dataclass(frozen=True, slots=True)
class FeasibilityRegion:
    """Boundary of the configurations a fixed-frame schedule can serve.

    Attributes:
        kind: Lattice topology.
        beta: SINR threshold the boundary was evaluated at.
        gamma: Path-loss exponent.
        k: Interference parameter.
        dd_max: Largest admissible ``D/d`` at ``beta`` (strict bound).
        beta_max: Largest admissible threshold at ``D/d = 1`` (strict bound).
        p_min: Power threshold at the requested ``D/d``, when one was given
            and the point is feasible.

    """

    kind: LatticeKind
    beta: float
    gamma: float
    k: int
    dd_max: float
    beta_max: float
    p_min: float | None = None

    @property
    def feasible(self) -> bool:
        """Return ``True`` when some irregularity ``D/d >= 1`` is admissible."""
        return self.dd_max > 1.0

    def admits(self, dd: float) -> bool:
        """Return ``True`` when ``D/d = dd`` lies strictly inside the region."""
        return self.feasible and 1.0 <= dd < self.dd_max


def require_bound_domain(gamma: float) -> None:
    """Raise :class:`DomainError` unless ``γ > 2``."""
    if gamma <= MIN_PATH_LOSS_EXPONENT:
        msg = f"Interference bounds need a path-loss exponent gamma > 2, got {gamma}"
        raise DomainError(msg)


def _distance(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def sinr_at(receiver: Point, sender: Point, interferers: Iterable[Point], params: SinrParams) -> float:
    """Return the SINR of ``sender`` at ``receiver``.

    Args:
        receiver: Receiver position.
        sender: Intended transmitter position.
        interferers: Positions of the other concurrent transmitters.
        params: Power, path loss and noise.

    Returns:
        ``P·d(s,r)^-γ / (Σ P·d(i,r)^-γ + η)``; ``inf`` when both the
        interference and the noise vanish.

    Raises:
        UndefinedGainError: If a transmitter shares the receiver's position.

    """
    signal_distance = _distance(receiver, sender)
    if signal_distance == 0:
        msg = f"Sender and receiver coincide at {receiver}"
        raise UndefinedGainError(msg)
    interference = 0.0
    for position in interferers:
        distance = _distance(receiver, position)
        if distance == 0:
            msg = f"Interferer and receiver coincide at {receiver}"
            raise UndefinedGainError(msg)
        interference += params.power * distance ** (-params.gamma)
    signal = params.power * signal_distance ** (-params.gamma)
    denominator = interference + params.eta
    if denominator == 0:
        return math.inf
    return signal / denominator


def min_signal(params: SinrParams) -> float:
    """Return the weakest received signal over a neighbor link, ``P / D**γ``."""
    return params.power / params.d_max**params.gamma


def hex_interference_bound(params: SinrParams) -> float:
    """Closed-form upper bound on interference in a hexagonal network.

    Raises:
        DomainError: If ``γ <= 2``.

    """
    require_bound_domain(params.gamma)
    g = params.gamma
    return 6.0 * params.power / params.reuse_distance**g * (2.0 / _SQRT3) ** g * (g - 1.0) / (g - 2.0)


def square_alpha(k: int, gamma: float) -> SquareAlpha:
    """Return ``ν``, ``φ`` and ``α = ν**γ + φ**γ`` for the square grid.

    Raises:
        DomainError: If ``k < 1`` (``ν`` is undefined at ``k = 0``).

    """
    if k < 1:
        msg = f"nu is undefined for k={k}; the square-grid bound needs k >= 1"
        raise DomainError(msg)
    inv_nu = (1.0 / _SQRT2) * (1.0 - 1.0 / (k + 1))
    inv_phi = math.sqrt(5.0) / math.sqrt(8.0) - (3.0 / math.sqrt(40.0)) / (k + 1)
    nu = 1.0 / inv_nu
    phi = 1.0 / inv_phi
    return SquareAlpha(nu=nu, phi=phi, alpha=nu**gamma + phi**gamma)


def square_interference_bound(params: SinrParams) -> float:
    """Closed-form upper bound on interference in a square-grid network.

    Raises:
        DomainError: If ``γ <= 2``.

    """
    require_bound_domain(params.gamma)
    g = params.gamma
    alpha = square_alpha(params.k, g).alpha
    return 4.0 * params.power / params.reuse_distance**g * alpha * (g - 1.0) / (g - 2.0)


def interference_bound(kind: LatticeKind, params: SinrParams) -> float:
    """Dispatch to the hexagonal or square-grid bound."""
    if kind is LatticeKind.HEXAGONAL:
        return hex_interference_bound(params)
    return square_interference_bound(params)


def _ring_distances(kind: LatticeKind, rings: int, reuse: float) -> tuple[NDArray[np.float64], int]:
    # Distances of one sector's transmitters, ring by ring, and the sector count.
    if kind is LatticeKind.HEXAGONAL:
        n = np.repeat(np.arange(1, rings + 1, dtype=np.float64), np.arange(1, rings + 1))
        j = np.concatenate([np.arange(m, dtype=np.float64) for m in range(1, rings + 1)])
        return reuse * np.sqrt(n * n + j * j - j * n), 6
    n = np.repeat(np.arange(1, rings + 1, dtype=np.float64), 2 * np.arange(1, rings + 1))
    j = np.concatenate([np.arange(2 * m, dtype=np.float64) for m in range(1, rings + 1)])
    return reuse * np.sqrt(n * n + j * j / 2.0 - j * n), 4


def exact_regular_interference(
    kind: LatticeKind,
    params: SinrParams,
    rings: int,
    *,
    receiver_offset: bool = True,
) -> float:
    """Sum the interference of a perfectly regular deployment ring by ring.

    Concurrent transmitters surround the receiver's sender on concentric
    rings. The hexagonal lattice has six sectors with ``n`` transmitters on
    ring ``n``; the square grid has four sides with ``2n`` each.

    Args:
        kind: Lattice topology.
        params: Power, spacing ``d`` and ``k``.
        rings: Number of rings to include (``>= 1``).
        receiver_offset: Measure distances from a receiver ``d`` closer to
            every interferer (``s - d``, the worst case); otherwise from the
            sender's own site.

    Returns:
        The truncated interference sum in power units.

    Raises:
        InvalidArgumentError: If ``rings < 1``.
        ConfigurationError: If an offset distance is not positive.

    """
    if rings < 1:
        msg = f"rings must be >= 1, got {rings}"
        raise InvalidArgumentError(msg)
    distances, sectors = _ring_distances(kind, rings, params.reuse_distance)
    if receiver_offset:
        distances = distances - params.d_min
        if np.any(distances <= 0):
            msg = "Receiver offset reaches an interferer; the regular interference sum is undefined"
            raise ConfigurationError(msg)
    total = sectors * params.power * float(np.sum(distances ** (-params.gamma)))
    logger.debug("exact %s interference over %d rings: %.6g", kind.value, rings, total)
    return total


def interference_tail_bound(
    kind: LatticeKind,
    params: SinrParams,
    rings: int,
    *,
    receiver_offset: bool = True,
) -> float:
    """Upper bound on the ring terms omitted beyond ``rings``.

    Each omitted transmitter on ring ``n`` is at least ``c·n·l`` away
    (``c = √3/2`` hexagonal, ``1/√2`` square), and the ring sizes grow
    linearly, so the tail is dominated by an integral of ``n**(1-γ)``.

    Raises:
        DomainError: If ``γ <= 2``.
        InvalidArgumentError: If ``rings < 1``.

    """
    require_bound_domain(params.gamma)
    if rings < 1:
        msg = f"rings must be >= 1, got {rings}"
        raise InvalidArgumentError(msg)
    g = params.gamma
    if kind is LatticeKind.HEXAGONAL:
        closest, per_ring = _SQRT3 / 2.0, 6.0
    else:
        closest, per_ring = 1.0 / _SQRT2, 8.0
    tail = per_ring * params.power / (closest * params.reuse_distance) ** g * rings ** (2.0 - g) / (g - 2.0)
    if receiver_offset:
        shrink = 1.0 - params.d_min / (closest * params.reuse_distance * (rings + 1))
        tail /= shrink**g
    return tail


def region_constants(kind: LatticeKind, gamma: float, k: int) -> tuple[float, float]:
    """Return ``(scale, c)`` with ``dd_max = scale·(c/β)**(1/γ)`` and ``β_max = scale**γ·c``."""
    if kind is LatticeKind.HEXAGONAL:
        return _SQRT3 * (k + 1) / 2.0, (gamma - 2.0) / (6.0 * (gamma - 1.0))
    alpha = square_alpha(k, gamma).alpha
    return float(k + 1), (gamma - 2.0) / (4.0 * alpha * (gamma - 1.0))


def power_threshold(kind: LatticeKind, params: SinrParams) -> float | None:
    """Return the smallest power that keeps every receiver above ``β``.

    The bound is strict: any power above the returned value works.

    Args:
        kind: Lattice topology.
        params: Threshold, path loss, noise, ``k`` and the distances ``d, D``.

    Returns:
        ``β·η·D**γ / (1 - β·(interference bound · D**γ / P))``, or ``None``
        when the denominator is not positive (no power suffices).

    Raises:
        DomainError: If ``γ <= 2``.

    """
    require_bound_domain(params.gamma)
    g = params.gamma
    ratio = params.d_max / ((params.k + 1) * params.d_min)
    if kind is LatticeKind.HEXAGONAL:
        load = 6.0 * params.beta * (2.0 * ratio / _SQRT3) ** g * (g - 1.0) / (g - 2.0)
    else:
        alpha = square_alpha(params.k, g).alpha
        load = 4.0 * alpha * params.beta * ratio**g * (g - 1.0) / (g - 2.0)
    denominator = 1.0 - load
    if denominator <= _BOUNDARY_TOLERANCE:
        logger.debug("power threshold undefined: denominator %.3g", denominator)
        return None
    return params.beta * params.eta * params.d_max**g / denominator


def feasibility(
    kind: LatticeKind,
    beta: float,
    gamma: float,
    k: int,
    *,
    dd: float | None = None,
    eta: float = DEFAULT_ETA,
    d_max: float = DEFAULT_MAX_NEIGHBOR_DISTANCE,
) -> FeasibilityRegion:
    """Evaluate the feasibility region boundaries.

    Args:
        kind: Lattice topology.
        beta: SINR threshold (> 0).
        gamma: Path-loss exponent (> 2).
        k: Interference parameter (>= 1).
        dd: Optional irregularity ``D/d`` at which to report ``p_min``.
        eta: Noise power used for ``p_min``.
        d_max: Maximum neighbor distance used for ``p_min``.

    Returns:
        Region with ``dd_max`` and ``beta_max``; ``feasible`` is ``False``
        when ``dd_max <= 1``.

    Raises:
        DomainError: If ``γ <= 2``.
        InvalidArgumentError: If ``beta <= 0`` or ``k < 1``.

    """
    require_bound_domain(gamma)
    if beta <= 0:
        msg = f"SINR threshold beta must be positive, got {beta}"
        raise InvalidArgumentError(msg)
    if k < 1:
        msg = f"Interference parameter k must be >= 1, got {k}"
        raise InvalidArgumentError(msg)
    scale, constant = region_constants(kind, gamma, k)
    dd_max = scale * (constant / beta) ** (1.0 / gamma)
    beta_max = scale**gamma * constant
    p_min: float | None = None
    if dd is not None and 1.0 <= dd < dd_max:
        params = SinrParams(beta=beta, gamma=gamma, eta=eta, k=k, d_min=d_max / dd, d_max=d_max)
        p_min = power_threshold(kind, params)
    region = FeasibilityRegion(
        kind=kind,
        beta=beta,
        gamma=gamma,
        k=k,
        dd_max=dd_max,
        beta_max=beta_max,
        p_min=p_min,
    )
    if not region.feasible:
        logger.debug("infeasible: %s beta=%g gamma=%g k=%d dd_max=%.4f", kind.value, beta, gamma, k, dd_max)
    return region


def feasibility_grid(
    kind: LatticeKind,
    beta: float,
    gammas: Sequence[float],
    ks: Sequence[int],
) -> list[FeasibilityRegion]:
    """Evaluate :func:`feasibility` over every ``(γ, k)`` pair, γ-major."""
    return [feasibility(kind, beta, gamma, k) for gamma in gammas for k in ks]
