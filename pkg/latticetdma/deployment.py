"""Randomly perturbed physical deployments and full-frame SINR evaluation.

Lengths are normalized so that the maximum neighbor distance ``D`` is 1. A
deployment with irregularity target ``D/d`` places each lattice point on the
lattice of nominal spacing ``1 - 2·r_max`` and moves it to a random point on a
circle of radius ``u / (2(2+u))`` around its site, with ``u`` drawn uniformly
from ``[0, D/d - 1]``. The largest radius is
``r_max = (D/d - 1) / (2(D/d + 1))``, so no neighbor pair ends up more than
``D = 1`` apart.

Random draws come from :func:`numpy.random.default_rng` (PCG64): one array of
``u`` values followed by one array of angles, in row-major node order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, TypedDict

import numpy as np

from .constants import RNG_IDENTITY, LatticeKind
from .errors import InvalidArgumentError, UndefinedGainError
from .lattice import LatticeCoord, NetworkExtent, embed_array, neighbor_offsets
from .sinr import SinrParams, region_constants, require_bound_domain

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping

    from numpy.typing import NDArray

    from .scheduler import Schedule

logger = logging.getLogger(__name__)


def max_displacement(dd_target: float) -> float:
    """Return ``r_max = (D/d - 1) / (2(D/d + 1))`` in units of ``D``."""
    return (dd_target - 1.0) / (2.0 * (dd_target + 1.0))


def nominal_spacing(dd_target: float) -> float:
    """Return the lattice spacing ``1 - 2·r_max`` that keeps neighbors within ``D = 1``."""
    return 1.0 - 2.0 * max_displacement(dd_target)


@dataclass(frozen=True, slots=True)
class Deployment:
    """Physical placement of every node of an extent.

    Attributes:
        kind: Lattice topology.
        extent: Nodes, in row-major order.
        positions: ``(n, 2)`` planar positions aligned with ``extent.nodes``.
        nominal_spacing: Lattice spacing before perturbation.
        dd_target: Irregularity target ``D/d``.
        seed: Seed the positions were drawn with.

    """

    kind: LatticeKind
    extent: NetworkExtent
    positions: NDArray[np.float64]
    nominal_spacing: float
    dd_target: float
    seed: int
    index: Mapping[LatticeCoord, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.positions.shape != (len(self.extent), 2):
            msg = f"positions must have shape ({len(self.extent)}, 2), got {self.positions.shape}"
            raise InvalidArgumentError(msg)
        object.__setattr__(self, "index", {node: i for i, node in enumerate(self.extent)})

    def position(self, p: LatticeCoord) -> tuple[float, float]:
        """Return the planar position of node ``p``."""
        x, y = self.positions[self.index[p]]
        return (float(x), float(y))

    def to_rows(self) -> list[tuple[int, int, float, float]]:
        """Return ``(x, y, px, py)`` rows in row-major node order."""
        return [(node.x, node.y, float(px), float(py)) for node, (px, py) in zip(self.extent, self.positions)]


def generate(kind: LatticeKind, extent: NetworkExtent, dd_target: float, seed: int) -> Deployment:
    """Draw a perturbed deployment.

    Args:
        kind: Lattice topology.
        extent: Nodes to place.
        dd_target: Irregularity target ``D/d`` (``>= 1``); ``1`` gives a
            perfectly regular placement.
        seed: Seed for the PCG64 generator.

    Returns:
        Deployment whose positions depend only on the arguments.

    Raises:
        InvalidArgumentError: If ``dd_target < 1``.

    """
    if not dd_target >= 1.0:
        msg = f"Irregularity target D/d must be >= 1, got {dd_target}"
        raise InvalidArgumentError(msg)
    rng = np.random.default_rng(seed)
    count = len(extent)
    u = rng.uniform(0.0, dd_target - 1.0, size=count)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=count)
    radius = u / (2.0 * (2.0 + u))
    spacing = nominal_spacing(dd_target)
    sites = embed_array(kind, extent.as_array(), spacing)
    positions = sites + np.column_stack((radius * np.cos(theta), radius * np.sin(theta)))
    logger.debug("generated %s deployment: %d nodes, D/d=%.4f, seed=%d", kind.value, count, dd_target, seed)
    return Deployment(
        kind=kind,
        extent=extent,
        positions=positions,
        nominal_spacing=spacing,
        dd_target=dd_target,
        seed=seed,
    )


@dataclass(frozen=True, slots=True)
class RealizedGeometry:
    """Extremes of the realized neighbor distances.

    Attributes:
        d_min: Smallest distance between lattice neighbors.
        d_max: Largest distance between lattice neighbors.
        pairs: Number of neighbor pairs measured (``0`` leaves both at ``0.0``).

    """

    d_min: float
    d_max: float
    pairs: int

    @property
    def ratio(self) -> float:
        """Realized irregularity ``d_max / d_min`` (``nan`` without pairs)."""
        return self.d_max / self.d_min if self.pairs else math.nan


def _neighbor_pairs(dep: Deployment) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
    left: list[int] = []
    right: list[int] = []
    # Half of the offsets visits each undirected pair once.
    half = [(dx, dy) for dx, dy in neighbor_offsets(dep.kind) if (dy, dx) > (0, 0)]
    for i, node in enumerate(dep.extent):
        for dx, dy in half:
            j = dep.index.get(node.shifted(dx, dy))
            if j is not None:
                left.append(i)
                right.append(j)
    return np.asarray(left, dtype=np.intp), np.asarray(right, dtype=np.intp)


def realized_geometry(dep: Deployment) -> RealizedGeometry:
    """Measure the smallest and largest distances between lattice neighbors."""
    left, right = _neighbor_pairs(dep)
    if left.size == 0:
        return RealizedGeometry(d_min=0.0, d_max=0.0, pairs=0)
    lengths = np.linalg.norm(dep.positions[left] - dep.positions[right], axis=1)
    return RealizedGeometry(d_min=float(lengths.min()), d_max=float(lengths.max()), pairs=int(left.size))


@dataclass(frozen=True, slots=True)
class RhoRecord:
    """SINR outcome of one transmitter-receiver link.

    Attributes:
        slot: Slot the transmitter uses.
        transmitter: Sending node.
        receiver: Receiving neighbor.
        sinr: Signal-to-interference-plus-noise ratio.
        rho: ``sinr / β``.

    """

    slot: int
    transmitter: LatticeCoord
    receiver: LatticeCoord
    sinr: float
    rho: float

    def to_row(self) -> tuple[int, int, int, int, int, float, float]:
        """Return the ``slot,tx_x,tx_y,rx_x,rx_y,sinr,rho`` export row."""
        return (
            self.slot,
            self.transmitter.x,
            self.transmitter.y,
            self.receiver.x,
            self.receiver.y,
            self.sinr,
            self.rho,
        )


class RhoSummary(TypedDict):
    """Aggregate statistics of a :class:`RhoReport`."""

    count: int
    violations: int
    min_rho: float | None
    avg_rho: float | None
    avg_over_min: float | None
    power: float
    beta: float
    d_min: float
    d_max: float
    seed: int
    rng: str


@dataclass(frozen=True, slots=True)
class RhoReport:
    """Per-link SINR results of one full frame.

    The record columns are parallel numpy arrays so that large deployments
    stay cheap; :meth:`records` materialises :class:`RhoRecord` objects.

    Attributes:
        slots: Slot of each link.
        transmitters: ``(m, 2)`` lattice coordinates of the senders.
        receivers: ``(m, 2)`` lattice coordinates of the receivers.
        sinr: SINR of each link.
        rho: ``sinr / β`` of each link.
        power: Transmit power used.
        beta: SINR threshold.
        geometry: Realized neighbor distance extremes.
        seed: Deployment seed.

    """

    slots: NDArray[np.int64]
    transmitters: NDArray[np.int64]
    receivers: NDArray[np.int64]
    sinr: NDArray[np.float64]
    rho: NDArray[np.float64]
    power: float
    beta: float
    geometry: RealizedGeometry
    seed: int

    @property
    def is_empty(self) -> bool:
        """Return ``True`` when no link was evaluated."""
        return self.rho.size == 0

    @property
    def count(self) -> int:
        """Number of evaluated links."""
        return int(self.rho.size)

    @property
    def min_rho(self) -> float | None:
        """Smallest ρ, ``None`` for an empty report."""
        return None if self.is_empty else float(self.rho.min())

    @property
    def avg_rho(self) -> float | None:
        """Mean ρ computed with a compensated sum, ``None`` for an empty report."""
        if self.is_empty:
            return None
        # fsum is exact for finite values and order-independent.
        return math.fsum(self.rho.tolist()) / self.count

    @property
    def violations(self) -> int:
        """Number of links with ρ < 1."""
        return int(np.count_nonzero(self.rho < 1.0))

    def records(self) -> Iterator[RhoRecord]:
        """Yield the per-link records in evaluation order."""
        for slot, (tx, ty), (rx, ry), sinr, rho in zip(
            self.slots.tolist(),
            self.transmitters.tolist(),
            self.receivers.tolist(),
            self.sinr.tolist(),
            self.rho.tolist(),
        ):
            yield RhoRecord(slot, LatticeCoord(tx, ty), LatticeCoord(rx, ry), sinr, rho)

    def summary(self) -> RhoSummary:
        """Return the aggregate statistics."""
        min_rho = self.min_rho
        avg_rho = self.avg_rho
        ratio = None if min_rho is None or avg_rho is None or min_rho == 0 else avg_rho / min_rho
        return {
            "count": self.count,
            "violations": self.violations,
            "min_rho": min_rho,
            "avg_rho": avg_rho,
            "avg_over_min": ratio,
            "power": self.power,
            "beta": self.beta,
            "d_min": self.geometry.d_min,
            "d_max": self.geometry.d_max,
            "seed": self.seed,
            "rng": RNG_IDENTITY,
        }


def _slot_links(
    dep: Deployment,
    transmitters: list[LatticeCoord],
) -> tuple[list[int], list[int]]:
    # (transmitter index within the slot, receiver extent index) for every link.
    owners: list[int] = []
    receivers: list[int] = []
    offsets = neighbor_offsets(dep.kind)
    for t_index, node in enumerate(transmitters):
        for dx, dy in offsets:
            r = dep.index.get(node.shifted(dx, dy))
            if r is not None:
                owners.append(t_index)
                receivers.append(r)
    return owners, receivers


def evaluate(dep: Deployment, sched: Schedule, params: SinrParams) -> RhoReport:
    """Compute the SINR at every receiver of every slot.

    Each scheduled transmitter sends to each of its lattice neighbors inside
    the extent; the interference at a receiver is the sum over every other
    transmitter of the same slot at its perturbed position.

    Args:
        dep: Deployment providing positions.
        sched: Schedule over the same kind and extent.
        params: Threshold, path loss, noise and transmit power.

    Returns:
        Report with one record per link; empty (and flagged) when the frame
        has no links.

    Raises:
        InvalidArgumentError: If the schedule does not match the deployment.
        UndefinedGainError: If a transmitter sits on a receiver's position.

    """
    if sched.kind is not dep.kind:
        msg = f"Schedule is for {sched.kind.value} but the deployment is {dep.kind.value}"
        raise InvalidArgumentError(msg)
    missing = [node for node in dep.extent if sched.slot(node) is None]
    if missing:
        msg = f"Schedule does not cover {len(missing)} deployed node(s), e.g. {missing[0]}"
        raise InvalidArgumentError(msg)

    by_slot: dict[int, list[LatticeCoord]] = {}
    for node in dep.extent:
        by_slot.setdefault(sched.slot_of[node], []).append(node)

    nodes = dep.extent.as_array()
    slot_parts: list[NDArray[np.int64]] = []
    tx_parts: list[NDArray[np.int64]] = []
    rx_parts: list[NDArray[np.int64]] = []
    sinr_parts: list[NDArray[np.float64]] = []
    gamma = params.gamma

    for slot in sorted(by_slot):
        transmitters = by_slot[slot]
        owners, receivers = _slot_links(dep, transmitters)
        if not owners:
            continue
        tx_idx = np.array([dep.index[t] for t in transmitters], dtype=np.intp)
        owner = np.asarray(owners, dtype=np.intp)
        rx_idx = np.asarray(receivers, dtype=np.intp)

        deltas = dep.positions[rx_idx][:, None, :] - dep.positions[tx_idx][None, :, :]
        distances = np.hypot(deltas[..., 0], deltas[..., 1])
        if np.any(distances == 0):
            msg = f"A transmitter coincides with a receiver in slot {slot}"
            raise UndefinedGainError(msg)
        gains = params.power * distances ** (-gamma)
        rows = np.arange(owner.size)
        signal = gains[rows, owner].copy()
        gains[rows, owner] = 0.0
        denominator = gains.sum(axis=1) + params.eta
        with np.errstate(divide="ignore"):
            sinr = np.where(denominator > 0, signal / np.where(denominator > 0, denominator, 1.0), np.inf)

        slot_parts.append(np.full(owner.size, slot, dtype=np.int64))
        tx_parts.append(nodes[tx_idx[owner]])
        rx_parts.append(nodes[rx_idx])
        sinr_parts.append(sinr)
        logger.debug("slot %d: %d transmitters, %d links", slot, tx_idx.size, owner.size)

    if sinr_parts:
        sinr_all = np.concatenate(sinr_parts)
        report_parts = (
            np.concatenate(slot_parts),
            np.concatenate(tx_parts),
            np.concatenate(rx_parts),
        )
    else:
        logger.warning("Frame has no transmitter-receiver links; the report is empty")
        sinr_all = np.empty(0, dtype=np.float64)
        report_parts = (
            np.empty(0, dtype=np.int64),
            np.empty((0, 2), dtype=np.int64),
            np.empty((0, 2), dtype=np.int64),
        )

    return RhoReport(
        slots=report_parts[0],
        transmitters=report_parts[1],
        receivers=report_parts[2],
        sinr=sinr_all,
        rho=sinr_all / params.beta,
        power=params.power,
        beta=params.beta,
        geometry=realized_geometry(dep),
        seed=dep.seed,
    )


@dataclass(frozen=True, slots=True)
class OperatingPoint:
    """A point of the feasibility region chosen by the fraction ``f``.

    Attributes:
        kind: Lattice topology.
        gamma: Path-loss exponent.
        k: Interference parameter.
        f: Fraction of the way towards the region boundary.
        beta: SINR threshold ``f·β_max``.
        dd: Irregularity ``1 + f·((D/d)_max − 1)``.
        beta_max: Largest admissible threshold.
        dd_max: Largest admissible ``D/d`` at ``beta`` (``inf`` when ``beta = 0``).

    """

    kind: LatticeKind
    gamma: float
    k: int
    f: float
    beta: float
    dd: float
    beta_max: float
    dd_max: float

    @property
    def feasible(self) -> bool:
        """Return ``True`` for a non-degenerate point strictly inside the region."""
        return self.beta > 0 and 1.0 <= self.dd < self.dd_max


def operating_point(kind: LatticeKind, gamma: float, k: int, f: float) -> OperatingPoint:
    """Pick the threshold and irregularity a fraction ``f`` towards the boundary.

    ``β = f·β_max``; ``(D/d)_max`` is evaluated at that ``β`` and the
    irregularity is ``1 + f·((D/d)_max − 1)``. ``f = 0`` and ``f = 1`` give
    degenerate points reported as infeasible.

    Raises:
        InvalidArgumentError: If ``f`` is outside ``[0, 1]`` or ``k < 1``.
        DomainError: If ``γ <= 2``.

    """
    require_bound_domain(gamma)
    if not 0.0 <= f <= 1.0:
        msg = f"Operating fraction f must be within [0, 1], got {f}"
        raise InvalidArgumentError(msg)
    if k < 1:
        msg = f"Interference parameter k must be >= 1, got {k}"
        raise InvalidArgumentError(msg)
    scale, constant = region_constants(kind, gamma, k)
    beta_max = scale**gamma * constant
    beta = f * beta_max
    dd_max = math.inf if beta == 0 else scale * (constant / beta) ** (1.0 / gamma)
    dd = 1.0 if beta == 0 else 1.0 + f * (dd_max - 1.0)
    point = OperatingPoint(
        kind=kind,
        gamma=gamma,
        k=k,
        f=f,
        beta=beta,
        dd=dd,
        beta_max=beta_max,
        dd_max=dd_max,
    )
    if not point.feasible:
        logger.debug("degenerate operating point: %s", point)
    return point
