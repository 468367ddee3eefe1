"""Coordinates, distances and basis sections of hexagonal and square lattices.

Nodes are addressed by integer pairs ``(x, y)``. On the hexagonal lattice the
two axes are diagonals at an angle of 2π/3, so the six unit neighbors are
``(±1, 0)``, ``(0, ±1)`` and ``±(1, 1)`` and the graph distance is
``max(|dx|, |dy|, |dx - dy|)``. On the square grid the four neighbors are the
axis steps and the graph distance is the L1 norm.

A finite network is a :class:`NetworkExtent`, an explicit set of lattice
nodes (usually an axis-aligned box in lattice coordinates, which is a rhombic
region on the hexagonal lattice).

A :class:`BasisSection` is a region whose translated replicas tile the whole
lattice. The scheduler's slot of a node is its coordinate relative to the
replica that contains it, so :meth:`BasisSection.locate` is what makes the
schedule message-free.

Examples:
    >>> graph_distance(LatticeKind.HEXAGONAL, LatticeCoord(0, 0), LatticeCoord(2, -1))
    3
    >>> sorted(ring_points(BasisSection.rhombus(3), 1))
    [LatticeCoord(x=0, y=1), LatticeCoord(x=1, y=0), LatticeCoord(x=1, y=1)]

"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum, unique
from typing import TYPE_CHECKING

import numpy as np

from .constants import BFS_RADIUS_SLACK, HEX_NEIGHBOR_OFFSETS, SQUARE_NEIGHBOR_OFFSETS, LatticeKind
from .errors import InvalidArgumentError, OracleFailureError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

_SQRT3_OVER_2 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True, slots=True, order=True)
class LatticeCoord:
    """Integer lattice address.

    Attributes:
        x: First lattice coordinate.
        y: Second lattice coordinate.

    """

    x: int
    y: int

    def __add__(self, other: LatticeCoord) -> LatticeCoord:
        return LatticeCoord(self.x + other.x, self.y + other.y)

    def __sub__(self, other: LatticeCoord) -> LatticeCoord:
        return LatticeCoord(self.x - other.x, self.y - other.y)

    def shifted(self, dx: int, dy: int) -> LatticeCoord:
        """Return the coordinate translated by ``(dx, dy)``."""
        return LatticeCoord(self.x + dx, self.y + dy)

    def as_tuple(self) -> tuple[int, int]:
        """Return ``(x, y)``."""
        return (self.x, self.y)


ORIGIN = LatticeCoord(0, 0)


def neighbor_offsets(kind: LatticeKind) -> tuple[tuple[int, int], ...]:
    """Return the unit-distance neighbor offsets of a lattice kind."""
    return HEX_NEIGHBOR_OFFSETS if kind is LatticeKind.HEXAGONAL else SQUARE_NEIGHBOR_OFFSETS


@dataclass(frozen=True, slots=True)
class NetworkExtent:
    """Finite set of lattice nodes forming a network.

    Nodes are kept sorted row-major (by ``y`` then ``x``) so every iteration
    over an extent, and therefore every seeded draw made per node, happens in a
    reproducible order.

    Attributes:
        nodes: Unique member coordinates, sorted row-major.

    """

    nodes: tuple[LatticeCoord, ...]
    _members: frozenset[LatticeCoord] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        members = frozenset(self.nodes)
        if len(members) != len(self.nodes):
            msg = "NetworkExtent nodes must be unique"
            raise InvalidArgumentError(msg)
        ordered = tuple(sorted(self.nodes, key=lambda c: (c.y, c.x)))
        object.__setattr__(self, "nodes", ordered)
        object.__setattr__(self, "_members", members)

    @classmethod
    def box(cls, width: int, height: int, origin: LatticeCoord = ORIGIN) -> NetworkExtent:
        """Build the axis-aligned box ``[ox, ox+width) × [oy, oy+height)``.

        Args:
            width: Number of columns (``>= 0``).
            height: Number of rows (``>= 0``).
            origin: Lower-left corner.

        Returns:
            The extent; empty when either dimension is zero.

        Raises:
            InvalidArgumentError: If a dimension is negative.

        """
        if width < 0 or height < 0:
            msg = f"Extent dimensions must be non-negative, got {width}x{height}"
            raise InvalidArgumentError(msg)
        return cls(
            tuple(LatticeCoord(origin.x + i, origin.y + j) for j in range(height) for i in range(width)),
        )

    @classmethod
    def centered(cls, radius: int) -> NetworkExtent:
        """Build the box ``[-radius, radius]²`` around the origin."""
        side = 2 * radius + 1
        return cls.box(side, side, LatticeCoord(-radius, -radius))

    @classmethod
    def for_node_count(cls, count: int) -> NetworkExtent:
        """Build a near-square box holding exactly ``count`` nodes.

        The smallest square side whose area reaches ``count`` fixes the row
        width; rows are filled bottom-up and the last row is left partial.

        Raises:
            InvalidArgumentError: If ``count`` is negative.

        """
        if count < 0:
            msg = f"Node count must be non-negative, got {count}"
            raise InvalidArgumentError(msg)
        if count == 0:
            return cls(())
        side = math.isqrt(count - 1) + 1
        rows = -(-count // side)
        nodes = [LatticeCoord(i, j) for j in range(rows) for i in range(side)]
        return cls(tuple(nodes[:count]))

    @classmethod
    def from_nodes(cls, nodes: Iterable[LatticeCoord]) -> NetworkExtent:
        """Build an extent from arbitrary unique coordinates."""
        return cls(tuple(nodes))

    def __contains__(self, item: object) -> bool:
        return item in self._members

    def __iter__(self) -> Iterator[LatticeCoord]:
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def size(self) -> int:
        """Number of nodes ``n``."""
        return len(self.nodes)

    @property
    def is_empty(self) -> bool:
        """Return ``True`` for an extent without nodes."""
        return not self.nodes

    def bounds(self) -> tuple[int, int, int, int]:
        """Return ``(x_min, x_max, y_min, y_max)`` (inclusive).

        Raises:
            InvalidArgumentError: If the extent is empty.

        """
        if not self.nodes:
            msg = "An empty extent has no bounds"
            raise InvalidArgumentError(msg)
        xs = [c.x for c in self.nodes]
        return min(xs), max(xs), self.nodes[0].y, self.nodes[-1].y

    def as_array(self) -> NDArray[np.int64]:
        """Return the nodes as an ``(n, 2)`` integer array in row-major order."""
        return np.array([c.as_tuple() for c in self.nodes], dtype=np.int64).reshape(-1, 2)


def graph_distance(kind: LatticeKind, a: LatticeCoord, b: LatticeCoord) -> int:
    """Return the hop count of a shortest lattice path between two nodes.

    Args:
        kind: Lattice topology.
        a: First node.
        b: Second node.

    Returns:
        ``max(|dx|, |dy|, |dx - dy|)`` on the hexagonal lattice and
        ``|dx| + |dy|`` on the square grid, where ``(dx, dy) = b - a``.

    """
    dx = b.x - a.x
    dy = b.y - a.y
    if kind is LatticeKind.HEXAGONAL:
        return max(abs(dx), abs(dy), abs(dx - dy))
    return abs(dx) + abs(dy)


def bfs_distance(kind: LatticeKind, a: LatticeCoord, b: LatticeCoord, *, radius: int | None = None) -> int:
    """Return the shortest hop count found by breadth-first search.

    This is an oracle independent of :func:`graph_distance`: it walks the
    unit-neighbor graph and knows nothing about the closed forms. The walk is
    confined to the bounding box of ``a`` and ``b`` grown by a small margin
    and stops after ``radius`` levels.

    Args:
        kind: Lattice topology.
        a: Start node.
        b: Target node.
        radius: Maximum number of BFS levels; defaults to ``|dx| + |dy|``,
            which bounds both lattice metrics from above.

    Returns:
        Number of hops on a shortest path.

    Raises:
        OracleFailureError: If ``b`` is not reached within ``radius`` levels.

    """
    if a == b:
        return 0
    limit = abs(b.x - a.x) + abs(b.y - a.y) if radius is None else radius
    x_lo = min(a.x, b.x) - BFS_RADIUS_SLACK
    x_hi = max(a.x, b.x) + BFS_RADIUS_SLACK
    y_lo = min(a.y, b.y) - BFS_RADIUS_SLACK
    y_hi = max(a.y, b.y) + BFS_RADIUS_SLACK
    offsets = neighbor_offsets(kind)

    seen = {a.as_tuple()}
    frontier: deque[tuple[int, int, int]] = deque([(a.x, a.y, 0)])
    target = b.as_tuple()
    while frontier:
        x, y, depth = frontier.popleft()
        if depth >= limit:
            continue
        for dx, dy in offsets:
            nxt = (x + dx, y + dy)
            if nxt in seen or not (x_lo <= nxt[0] <= x_hi and y_lo <= nxt[1] <= y_hi):
                continue
            if nxt == target:
                return depth + 1
            seen.add(nxt)
            frontier.append((nxt[0], nxt[1], depth + 1))

    msg = f"BFS from {a} did not reach {b} within {limit} hops"
    raise OracleFailureError(msg)


def neighbors(kind: LatticeKind, p: LatticeCoord, extent: NetworkExtent | None = None) -> frozenset[LatticeCoord]:
    """Return the lattice neighbors of ``p``, optionally clipped to an extent.

    Args:
        kind: Lattice topology.
        p: Node whose neighbors are wanted.
        extent: When given, only neighbors inside the extent are returned.

    Returns:
        Six (hexagonal) or four (square) coordinates before clipping.

    """
    found = (p.shifted(dx, dy) for dx, dy in neighbor_offsets(kind))
    if extent is None:
        return frozenset(found)
    return frozenset(q for q in found if q in extent)


def embed(kind: LatticeKind, p: LatticeCoord, spacing: float) -> tuple[float, float]:
    """Map a lattice address to a point in the plane.

    The hexagonal embedding uses ``e1 = (1, 0)`` and ``e2`` at angle 2π/3 from
    it, so every unit neighbor lies exactly ``spacing`` away. The square grid
    uses the orthonormal basis.

    Args:
        kind: Lattice topology.
        p: Lattice address.
        spacing: Euclidean length of one lattice edge.

    Returns:
        ``(px, py)`` in the same length unit as ``spacing``.

    Raises:
        InvalidArgumentError: If ``spacing`` is not positive.

    """
    if spacing <= 0:
        msg = f"Lattice spacing must be positive, got {spacing}"
        raise InvalidArgumentError(msg)
    if kind is LatticeKind.HEXAGONAL:
        return (spacing * (p.x - 0.5 * p.y), spacing * _SQRT3_OVER_2 * p.y)
    return (spacing * p.x, spacing * p.y)


def embed_array(kind: LatticeKind, coords: NDArray[np.int64], spacing: float) -> NDArray[np.float64]:
    """Vectorised :func:`embed` over an ``(n, 2)`` coordinate array."""
    if spacing <= 0:
        msg = f"Lattice spacing must be positive, got {spacing}"
        raise InvalidArgumentError(msg)
    xy = coords.astype(np.float64)
    if kind is LatticeKind.HEXAGONAL:
        basis = np.array([[1.0, 0.0], [-0.5, _SQRT3_OVER_2]])
        return spacing * (xy @ basis)
    return spacing * xy


@unique
class SectionShape(str, Enum):
    """Basis lattice section shapes."""

    RHOMBUS = "rhombus"
    RHOMBOID = "rhomboid"
    RECTANGLE = "rectangle"


@dataclass(frozen=True, slots=True)
class BasisSection:
    """A lattice region whose translated replicas tile the lattice.

    ``size`` is interpreted per shape:

    * rhombus of side ``i`` (hexagonal): corners ``(0,0), (i,0), (i,i), (0,i)``,
      all four edges included, ``(i+1)²`` points, replicas every ``i+1`` along
      both axes.
    * rhomboid of size ``(i, ⌈i/2⌉)`` (square): corners ``(0,0), (i,0),
      (i-j, j), (-j, j)`` with ``j = ⌈i/2⌉``; the top edge belongs to the
      replica above, leaving ``(i+1)·j`` points.
    * rectangle of width ``w`` (square): ``w × ⌈w/2⌉`` points; each band of
      replicas is shifted by ``⌈w/2⌉`` columns relative to the one below.

    Attributes:
        shape: Section shape.
        size: Side length ``i`` (rhombus, rhomboid) or column count ``w``
            (rectangle).
        origin: Lattice point the section is anchored at.

    """

    shape: SectionShape
    size: int
    origin: LatticeCoord = ORIGIN

    def __post_init__(self) -> None:
        if self.size < 1:
            msg = f"Basis section size must be >= 1, got {self.size}"
            raise InvalidArgumentError(msg)

    @classmethod
    def rhombus(cls, side: int, origin: LatticeCoord = ORIGIN) -> BasisSection:
        """Hexagonal rhombus section of the given side."""
        return cls(SectionShape.RHOMBUS, side, origin)

    @classmethod
    def rhomboid(cls, side: int, origin: LatticeCoord = ORIGIN) -> BasisSection:
        """Square-grid rhomboid section of size ``(side, ⌈side/2⌉)``."""
        return cls(SectionShape.RHOMBOID, side, origin)

    @classmethod
    def rectangle(cls, width: int, origin: LatticeCoord = ORIGIN) -> BasisSection:
        """Square-grid rectangle section of ``width × ⌈width/2⌉`` points."""
        return cls(SectionShape.RECTANGLE, width, origin)

    @property
    def kind(self) -> LatticeKind:
        """Lattice the section lives on."""
        return LatticeKind.HEXAGONAL if self.shape is SectionShape.RHOMBUS else LatticeKind.SQUARE

    @property
    def period(self) -> int:
        """Horizontal replica period (columns per row of the section)."""
        return self.size if self.shape is SectionShape.RECTANGLE else self.size + 1

    @property
    def rows(self) -> int:
        """Number of lattice rows in the section (vertical replica period)."""
        if self.shape is SectionShape.RHOMBUS:
            return self.size + 1
        return -(-self.size // 2)

    @property
    def point_count(self) -> int:
        """Number of lattice points in the section."""
        return self.period * self.rows

    def _row_start(self, row: int) -> int:
        return -row if self.shape is SectionShape.RHOMBOID else 0

    def _replica_shift(self, band: int) -> int:
        # Column offset of the replica origins in band ``band``.
        if self.shape is SectionShape.RHOMBOID:
            return -band * self.rows
        if self.shape is SectionShape.RECTANGLE:
            return -(band % 2) * self.rows
        return 0

    def contains(self, p: LatticeCoord) -> bool:
        """Return ``True`` when ``p`` lies in this (non-translated) section."""
        rx = p.x - self.origin.x
        ry = p.y - self.origin.y
        if not 0 <= ry < self.rows:
            return False
        start = self._row_start(ry)
        return start <= rx < start + self.period

    def points(self) -> tuple[LatticeCoord, ...]:
        """Return every lattice point of the section, row by row."""
        return tuple(
            self.origin.shifted(self._row_start(row) + col, row)
            for row in range(self.rows)
            for col in range(self.period)
        )

    def translated(self, origin: LatticeCoord) -> BasisSection:
        """Return the replica anchored at ``origin``."""
        return BasisSection(self.shape, self.size, origin)

    def replica_origin(self, column: int, band: int) -> LatticeCoord:
        """Return the origin of replica ``(column, band)`` of this tiling."""
        return self.origin.shifted(column * self.period + self._replica_shift(band), band * self.rows)

    def locate(self, p: LatticeCoord) -> tuple[LatticeCoord, LatticeCoord]:
        """Find the replica containing ``p`` by arithmetic alone.

        Args:
            p: Any lattice point.

        Returns:
            ``(replica_origin, relative)`` where ``relative = p - replica_origin``
            is a point of the section anchored at the lattice origin.

        """
        rx = p.x - self.origin.x
        ry = p.y - self.origin.y
        band = ry // self.rows
        shift = self._replica_shift(band)
        if self.shape is SectionShape.RHOMBOID:
            column = (rx + ry) // self.period
        else:
            column = (rx - shift) // self.period
        replica = self.replica_origin(column, band)
        return replica, p - replica

    def replica_origins(self, extent: NetworkExtent) -> tuple[LatticeCoord, ...]:
        """Enumerate origins of every replica that holds at least one extent node.

        The enumeration walks replica indices over a window derived from the
        extent bounds and keeps replicas with a member node; it does not use
        :meth:`locate`, so the two can be checked against each other.

        """
        if extent.is_empty:
            return ()
        x_min, x_max, y_min, y_max = extent.bounds()
        rows, period = self.rows, self.period
        band_lo = (y_min - self.origin.y) // rows - 1
        band_hi = (y_max - self.origin.y) // rows + 1
        found: list[LatticeCoord] = []
        for band in range(band_lo, band_hi + 1):
            shift = self._replica_shift(band)
            col_lo = (x_min - self.origin.x - shift - period) // period - 1
            col_hi = (x_max - self.origin.x - shift + rows) // period + 1
            for column in range(col_lo, col_hi + 1):
                origin = self.replica_origin(column, band)
                if any(q in extent for q in self.translated(origin).points()):
                    found.append(origin)
        return tuple(found)


def ring_points(section: BasisSection, hops: int) -> frozenset[LatticeCoord]:
    """Return the section points at graph distance ``hops`` from its origin.

    Raises:
        InvalidArgumentError: If ``hops`` is negative.

    """
    if hops < 0:
        msg = f"Ring index must be non-negative, got {hops}"
        raise InvalidArgumentError(msg)
    return frozenset(q for q in section.points() if graph_distance(section.kind, section.origin, q) == hops)


def receiver_eccentricity(section: BasisSection) -> int:
    """Return the largest distance from the origin's receivers to the section.

    For every section point other than the origin, take the graph distance to
    the nearest origin neighbor inside the section; return the maximum. This is
    the quantity that bounds how close a concurrent transmitter in a
    neighboring replica can come to any receiver of the origin.
    """
    first_ring = ring_points(section, 1)
    return max(
        (
            min(graph_distance(section.kind, r, q) for r in first_ring)
            for q in section.points()
            if q != section.origin
        ),
        default=0,
    )


def tiling_section(kind: LatticeKind, k: int) -> BasisSection:
    """Return the basis section whose replicas carry one transmitter per slot.

    Hexagonal networks use the rhombus of side ``k``; square grids use the
    shifted rectangles of ``(k+1) × ⌈(k+1)/2⌉`` points.

    Raises:
        InvalidArgumentError: If ``k < 1``.

    """
    if k < 1:
        msg = f"Interference parameter k must be >= 1, got {k}"
        raise InvalidArgumentError(msg)
    if kind is LatticeKind.HEXAGONAL:
        return BasisSection.rhombus(k)
    return BasisSection.rectangle(k + 1)


def coset(kind: LatticeKind, k: int, p: LatticeCoord, extent: NetworkExtent) -> frozenset[LatticeCoord]:
    """Return the extent nodes sharing ``p``'s relative coordinate in the k-tiling.

    Equivalently, the nodes the scheduler assigns to ``p``'s slot.
    """
    section = tiling_section(kind, k)
    _, relative = section.locate(p)
    members = frozenset(q for q in extent if section.locate(q)[1] == relative)
    logger.debug("coset of %s under %s k=%d: %d nodes", p, kind.value, k, len(members))
    return members
