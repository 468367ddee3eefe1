"""Message-free slot assignment and exhaustive schedule verification.

Every node derives its transmission slot from its own lattice address and the
interference parameter ``k``; no messages are exchanged. The hexagonal rule
tiles the lattice with rhombi of side ``k``, the square rule with rectangles of
``(k+1) × ⌈(k+1)/2⌉`` nodes whose bands are shifted by half a width, and the
slot is the node's position inside its tile.

Typical usage:
    >>> extent = NetworkExtent.box(6, 6)
    >>> schedule = build_schedule(LatticeKind.HEXAGONAL, 2, extent)
    >>> schedule.frame_length
    9
    >>> verify_schedule(schedule, extent).valid
    True

"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum, unique
from itertools import combinations
from typing import TYPE_CHECKING

from .constants import LatticeKind
from .errors import InvalidArgumentError
from .lattice import LatticeCoord, NetworkExtent, graph_distance, neighbors

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

logger = logging.getLogger(__name__)


@unique
class ViolationReason(str, Enum):
    """Why a schedule entry or a pair of concurrent transmitters is invalid."""

    K_HOP = "k-hop"
    PRIMARY = "primary"
    COVERAGE = "coverage"
    DUPLICATE = "duplicate"
    OUT_OF_FRAME = "out-of-frame"


def _require_k(k: int) -> None:
    if k < 1:
        msg = f"Interference parameter k must be >= 1, got {k}"
        raise InvalidArgumentError(msg)


def frame_length(kind: LatticeKind, k: int) -> int:
    """Return the number of slots per frame.

    ``(k+1)²`` on the hexagonal lattice, ``(k+1)·⌈(k+1)/2⌉`` on the square grid.

    Raises:
        InvalidArgumentError: If ``k < 1``.

    """
    _require_k(k)
    if kind is LatticeKind.HEXAGONAL:
        return (k + 1) ** 2
    return (k + 1) * -(-(k + 1) // 2)


def hex_slot(p: LatticeCoord, k: int) -> int:
    """Return the hexagonal-lattice slot of ``p``.

    Python's ``%`` already yields the non-negative remainder, so negative
    coordinates land in ``[0, k]`` like positive ones.
    """
    period = k + 1
    return p.x % period + period * (p.y % period)


def square_slot(p: LatticeCoord, k: int) -> int:
    """Return the square-grid slot of ``p``.

    With ``h = ⌈(k+1)/2⌉`` every other band of ``h`` rows is shifted by ``h``
    columns, so concurrent transmitters sit at ``(±(k+1), 0)`` and
    ``(±h, ±h)`` from each other rather than straight above.
    """
    period = k + 1
    height = -(-period // 2)
    band = (p.y // height) % 2
    u = (p.x + band * height) % period
    v = p.y % height
    return u + period * v


def slot_of(kind: LatticeKind, k: int, p: LatticeCoord) -> int:
    """Dispatch to :func:`hex_slot` or :func:`square_slot`."""
    return hex_slot(p, k) if kind is LatticeKind.HEXAGONAL else square_slot(p, k)


def conflicts(kind: LatticeKind, k: int, u: LatticeCoord, v: LatticeCoord) -> ViolationReason | None:
    """Decide whether two distinct nodes may transmit in the same slot.

    A transmission may go to any lattice neighbor of the sender, so ``u`` and
    ``v`` conflict when some neighbor of either one lies closer than ``k``
    hops to the other. Under ``k = 1`` adjacent transmitters are reported as a
    primary conflict (a node cannot send and receive at once).

    Args:
        kind: Lattice topology.
        k: Interference parameter (``>= 1``).
        u: First transmitter.
        v: Second transmitter.

    Returns:
        The violated rule, or ``None`` when the pair is compatible.

    """
    distance = graph_distance(kind, u, v)
    if distance == 0 or distance > k:
        # Every neighbor of u is at least ``distance - 1 >= k`` hops from v.
        return None
    if k == 1 and distance == 1:
        return ViolationReason.PRIMARY
    near_u = min(graph_distance(kind, r, v) for r in neighbors(kind, u))
    near_v = min(graph_distance(kind, r, u) for r in neighbors(kind, v))
    if near_u < k or near_v < k:
        return ViolationReason.K_HOP
    return None


@dataclass(frozen=True, slots=True)
class Schedule:
    """Slot assignment of a finite network.

    ``assignments`` keeps the rows in the order they were produced or loaded;
    a node assigned twice keeps its first slot in :attr:`slot_of` and the
    extra rows are reported by :func:`verify_schedule`.

    Attributes:
        kind: Lattice topology.
        k: Interference parameter.
        frame_length: Number of slots per frame.
        assignments: ``(node, slot)`` pairs.

    """

    kind: LatticeKind
    k: int
    frame_length: int
    assignments: tuple[tuple[LatticeCoord, int], ...] = ()
    slot_of: Mapping[LatticeCoord, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _require_k(self.k)
        if self.frame_length < 1:
            msg = f"Frame length must be >= 1, got {self.frame_length}"
            raise InvalidArgumentError(msg)
        mapping: dict[LatticeCoord, int] = {}
        for node, slot in self.assignments:
            mapping.setdefault(node, slot)
        object.__setattr__(self, "slot_of", mapping)

    def __len__(self) -> int:
        return len(self.slot_of)

    def slot(self, p: LatticeCoord) -> int | None:
        """Return the slot assigned to ``p`` or ``None``."""
        return self.slot_of.get(p)

    def to_rows(self) -> list[tuple[int, int, int]]:
        """Return ``(x, y, slot)`` rows in row-major node order."""
        return [(node.x, node.y, slot) for node, slot in sorted(self.assignments, key=lambda a: (a[0].y, a[0].x))]

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[tuple[int, int, int]],
        *,
        kind: LatticeKind,
        k: int,
        frame_length: int | None = None,
    ) -> Schedule:
        """Rebuild a schedule from ``(x, y, slot)`` rows.

        Args:
            rows: Rows as produced by :meth:`to_rows` (or read from CSV).
            kind: Lattice topology the rows belong to.
            k: Interference parameter.
            frame_length: Slots per frame; inferred as ``max(slot) + 1`` when
                omitted.

        """
        assignments = tuple((LatticeCoord(x, y), slot) for x, y, slot in rows)
        if frame_length is None:
            frame_length = max((slot for _, slot in assignments), default=0) + 1
        return cls(kind=kind, k=k, frame_length=frame_length, assignments=assignments)


@dataclass(frozen=True, slots=True)
class Violation:
    """One failed schedule check.

    Attributes:
        reason: Rule that was broken.
        slot: Slot the offending assignment uses, if any.
        node_a: First node involved.
        node_b: Second node for pairwise rules, ``None`` otherwise.

    """

    reason: ViolationReason
    slot: int | None
    node_a: LatticeCoord
    node_b: LatticeCoord | None = None

    def to_row(self) -> tuple[str, str, str, str]:
        """Return the ``slot,node_a,node_b,reason`` export row."""

        def fmt(node: LatticeCoord | None) -> str:
            return "" if node is None else f"{node.x}:{node.y}"

        return ("" if self.slot is None else str(self.slot), fmt(self.node_a), fmt(self.node_b), self.reason.value)


@dataclass(frozen=True, slots=True)
class VerificationReport:
    """Result of :func:`verify_schedule`.

    Attributes:
        violations: Every failed check, coverage first, then per slot.
        checked_pairs: Number of concurrent pairs examined.
        node_count: Number of extent nodes.

    """

    violations: tuple[Violation, ...] = ()
    checked_pairs: int = 0
    node_count: int = 0

    @property
    def valid(self) -> bool:
        """Return ``True`` when no check failed."""
        return not self.violations

    def counts(self) -> dict[str, int]:
        """Return the number of violations per reason (every reason listed)."""
        tally = Counter(v.reason for v in self.violations)
        return {reason.value: tally.get(reason, 0) for reason in ViolationReason}


def build_schedule(kind: LatticeKind, k: int, extent: NetworkExtent) -> Schedule:
    """Assign every extent node its slot.

    Args:
        kind: Lattice topology.
        k: Interference parameter (``>= 1``).
        extent: Nodes to schedule.

    Returns:
        Schedule with the closed-form frame length; every slot is below it.

    """
    length = frame_length(kind, k)
    if extent.is_empty:
        logger.warning("Building a %s schedule for an empty extent", kind.value)
    assignments = tuple((node, slot_of(kind, k, node)) for node in extent)
    logger.debug("built %s schedule k=%d: %d nodes, frame %d", kind.value, k, len(assignments), length)
    return Schedule(kind=kind, k=k, frame_length=length, assignments=assignments)


def verify_schedule(schedule: Schedule, extent: NetworkExtent) -> VerificationReport:
    """Check a schedule against coverage and the k-hop interference model.

    Coverage requires each extent node to appear exactly once with a slot in
    ``[0, frame_length)``. Every pair of distinct extent nodes sharing a slot
    is then checked with :func:`conflicts`.

    Args:
        schedule: Schedule under test.
        extent: Network the schedule must cover.

    Returns:
        Report whose violation list is empty iff the schedule is valid.

    """
    violations: list[Violation] = []
    seen: set[LatticeCoord] = set()
    for node, slot in schedule.assignments:
        if node not in extent:
            continue
        if node in seen:
            violations.append(Violation(ViolationReason.DUPLICATE, slot, node))
            continue
        seen.add(node)
        if not 0 <= slot < schedule.frame_length:
            violations.append(Violation(ViolationReason.OUT_OF_FRAME, slot, node))

    violations.extend(Violation(ViolationReason.COVERAGE, None, node) for node in extent if node not in seen)

    by_slot: defaultdict[int, list[LatticeCoord]] = defaultdict(list)
    for node in extent:
        slot = schedule.slot(node)
        if slot is not None:
            by_slot[slot].append(node)

    checked = 0
    for slot in sorted(by_slot):
        for a, b in combinations(by_slot[slot], 2):
            checked += 1
            reason = conflicts(schedule.kind, schedule.k, a, b)
            if reason is not None:
                violations.append(Violation(reason, slot, a, b))

    report = VerificationReport(violations=tuple(violations), checked_pairs=checked, node_count=len(extent))
    logger.debug("verified %d pairs: %d violations", checked, len(violations))
    return report


def concurrent_set(schedule: Schedule, slot: int, extent: NetworkExtent) -> frozenset[LatticeCoord]:
    """Return the extent nodes transmitting in ``slot``.

    Raises:
        InvalidArgumentError: If ``slot`` is outside ``[0, frame_length)``.

    """
    if not 0 <= slot < schedule.frame_length:
        msg = f"Slot {slot} is outside the frame [0, {schedule.frame_length})"
        raise InvalidArgumentError(msg)
    return frozenset(node for node in extent if schedule.slot(node) == slot)


def slot_usage(schedule: Schedule) -> tuple[int, ...]:
    """Return the number of nodes assigned to each slot of the frame."""
    tally = Counter(schedule.slot_of.values())
    return tuple(tally.get(slot, 0) for slot in range(schedule.frame_length))
