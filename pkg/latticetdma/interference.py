"""Interference graphs, clique numbers and approximation ratios.

Two nodes are joined in the interference graph when they cannot share a slot
(the rule in :func:`latticetdma.scheduler.conflicts`). Any clique must be
spread over distinct slots, so the clique number is a lower bound on the
length of every valid frame; comparing it with the scheduler's frame length
gives the approximation ratio.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .constants import CLIQUE_NODE_BUDGET, LatticeKind
from .errors import CliqueBudgetError, InvalidArgumentError
from .lattice import LatticeCoord, NetworkExtent
from .scheduler import conflicts, frame_length

logger = logging.getLogger(__name__)

__all__ = [
    "CliqueReport",
    "CliqueResult",
    "InterferenceGraph",
    "approximation_ratio",
    "brute_force_max_clique",
    "build_interference_graph",
    "clique_number_formula",
    "clique_report",
    "clique_witness_extent",
    "conflicts",
    "greedy_coloring_upper_bound",
]


@dataclass(frozen=True, slots=True)
class InterferenceGraph:
    """Conflict graph over the nodes of a finite network.

    Attributes:
        kind: Lattice topology.
        k: Interference parameter.
        graph: Undirected simple graph keyed by :class:`LatticeCoord`.

    """

    kind: LatticeKind
    k: int
    graph: nx.Graph

    @property
    def node_count(self) -> int:
        """Number of nodes."""
        return int(self.graph.number_of_nodes())

    @property
    def edge_count(self) -> int:
        """Number of conflicting pairs."""
        return int(self.graph.number_of_edges())

    def has_conflict(self, u: LatticeCoord, v: LatticeCoord) -> bool:
        """Return ``True`` when ``u`` and ``v`` may not share a slot."""
        return bool(self.graph.has_edge(u, v))


def build_interference_graph(kind: LatticeKind, k: int, extent: NetworkExtent) -> InterferenceGraph:
    """Build the interference graph of an extent.

    Only pairs within ``k`` hops can conflict, so candidates are drawn from
    the ``(2k+1)²`` box of offsets around each node.

    Args:
        kind: Lattice topology.
        k: Interference parameter (``>= 1``).
        extent: Nodes of the network.

    Returns:
        Graph with every extent node and one edge per conflicting pair.

    """
    if k < 1:
        msg = f"Interference parameter k must be >= 1, got {k}"
        raise InvalidArgumentError(msg)
    graph = nx.Graph()
    graph.add_nodes_from(extent)
    for u in extent:
        for dy in range(-k, k + 1):
            for dx in range(-k, k + 1):
                v = u.shifted(dx, dy)
                if (v.y, v.x) <= (u.y, u.x) or v not in extent:
                    continue
                if conflicts(kind, k, u, v) is not None:
                    graph.add_edge(u, v)
    logger.debug(
        "interference graph %s k=%d: %d nodes, %d edges",
        kind.value,
        k,
        graph.number_of_nodes(),
        graph.number_of_edges(),
    )
    return InterferenceGraph(kind=kind, k=k, graph=graph)


def clique_number_formula(kind: LatticeKind, k: int) -> int:
    """Return the clique number of the infinite lattice's interference graph.

    Even ``k`` on the hexagonal lattice gives the complete hexagon of diameter
    ``k``; odd ``k`` gives the hexagon of diameter ``k - 1`` plus one side of
    its next ring. On the square grid the values are ``k²/2 + k + 1`` (even)
    and ``(k+1)²/2`` (odd).

    Raises:
        InvalidArgumentError: If ``k < 1``.

    """
    if k < 1:
        msg = f"Interference parameter k must be >= 1, got {k}"
        raise InvalidArgumentError(msg)
    if kind is LatticeKind.HEXAGONAL:
        if k % 2 == 0:
            half = k // 2
            return 3 * half * half + 3 * half + 1
        inner = (k - 1) // 2
        return 1 + sum(6 * i for i in range(1, inner + 1)) + 3 * (k + 1) // 2 - 1
    if k % 2 == 0:
        return k * k // 2 + k + 1
    return (k + 1) ** 2 // 2


def approximation_ratio(kind: LatticeKind, k: int) -> Fraction:
    """Return ``frame_length / clique number`` as an exact fraction."""
    return Fraction(frame_length(kind, k), clique_number_formula(kind, k))


def clique_witness_extent(kind: LatticeKind, k: int) -> NetworkExtent:
    """Return a box that contains the lattice's maximum clique construction.

    The box spans ``k + 1`` lattice units on either side of the origin, which
    holds the diameter-``k`` constructions of both lattice kinds.
    """
    del kind
    return NetworkExtent.centered(k + 1)


@dataclass(frozen=True, slots=True)
class CliqueResult:
    """Exact maximum clique.

    Attributes:
        size: Clique number.
        witness: One maximum clique, sorted row-major.

    """

    size: int
    witness: tuple[LatticeCoord, ...]


def brute_force_max_clique(g: InterferenceGraph, *, budget: int = CLIQUE_NODE_BUDGET) -> CliqueResult:
    """Find a maximum clique exactly with networkx's branch and bound.

    Args:
        g: Interference graph.
        budget: Largest node count the exact search accepts.

    Returns:
        Clique number and one witness; ``0`` and an empty witness for a graph
        without nodes.

    Raises:
        CliqueBudgetError: If the graph has more than ``budget`` nodes.

    """
    if g.node_count > budget:
        msg = f"Exact clique search refused: {g.node_count} nodes exceeds the budget of {budget}"
        raise CliqueBudgetError(msg)
    members: list[LatticeCoord] = []
    if g.node_count:
        members, _ = nx.max_weight_clique(g.graph, weight=None)
    witness = sorted(members, key=lambda n: (n.y, n.x))
    logger.debug("max clique %s k=%d: %d", g.kind.value, g.k, len(witness))
    return CliqueResult(size=len(witness), witness=tuple(witness))


def greedy_coloring_upper_bound(g: InterferenceGraph) -> int:
    """Return the number of colors a largest-first greedy coloring uses.

    This is an upper bound on the chromatic number of the finite graph.
    """
    if g.node_count == 0:
        return 0
    coloring: dict[LatticeCoord, int] = nx.coloring.greedy_color(g.graph, strategy="largest_first")
    return max(coloring.values()) + 1


@dataclass(frozen=True, slots=True)
class CliqueReport:
    """Formula, oracle and ratio for one ``(kind, k)``.

    Attributes:
        kind: Lattice topology.
        k: Interference parameter.
        formula: Closed-form clique number.
        frame_length: Scheduler frame length.
        ratio: ``frame_length / formula``.
        oracle: Exact search result, ``None`` when skipped for budget.
        greedy_colors: Greedy coloring count, ``None`` when skipped.
        node_count: Nodes in the searched extent.

    """

    kind: LatticeKind
    k: int
    formula: int
    frame_length: int
    ratio: Fraction
    oracle: CliqueResult | None
    greedy_colors: int | None
    node_count: int

    @property
    def oracle_skipped(self) -> bool:
        """Return ``True`` when the extent exceeded the search budget."""
        return self.oracle is None

    @property
    def agrees(self) -> bool | None:
        """Return whether the oracle matches the formula (``None`` if skipped)."""
        return None if self.oracle is None else self.oracle.size == self.formula


def clique_report(
    kind: LatticeKind,
    k: int,
    extent: NetworkExtent | None = None,
    *,
    budget: int = CLIQUE_NODE_BUDGET,
) -> CliqueReport:
    """Compare the closed-form clique number with the exact oracle.

    Args:
        kind: Lattice topology.
        k: Interference parameter.
        extent: Extent to search; :func:`clique_witness_extent` by default.
        budget: Node budget for the exact search.

    Returns:
        Report; the oracle fields are ``None`` when the extent is too large.

    """
    region = clique_witness_extent(kind, k) if extent is None else extent
    graph = build_interference_graph(kind, k, region)
    oracle: CliqueResult | None
    colors: int | None
    try:
        oracle = brute_force_max_clique(graph, budget=budget)
    except CliqueBudgetError as exc:
        logger.warning("%s", exc)
        oracle, colors = None, None
    else:
        colors = greedy_coloring_upper_bound(graph)
    return CliqueReport(
        kind=kind,
        k=k,
        formula=clique_number_formula(kind, k),
        frame_length=frame_length(kind, k),
        ratio=approximation_ratio(kind, k),
        oracle=oracle,
        greedy_colors=colors,
        node_count=graph.node_count,
    )
