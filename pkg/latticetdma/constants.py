"""Shared constants used across the latticetdma codebase."""

from __future__ import annotations

import os
from enum import Enum, unique


@unique
class LatticeKind(str, Enum):
    """Lattice topologies supported by the scheduler.

    Inherits from str so values compare equal to their CLI spelling and
    plug into argparse ``choices`` without a custom converter.
    """

    HEXAGONAL = "hex"
    SQUARE = "square"

    @property
    def degree(self) -> int:
        """Number of lattice neighbors of an interior node."""
        return 6 if self is LatticeKind.HEXAGONAL else 4


HEX_NEIGHBOR_OFFSETS: tuple[tuple[int, int], ...] = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
SQUARE_NEIGHBOR_OFFSETS: tuple[tuple[int, int], ...] = ((1, 0), (-1, 0), (0, 1), (0, -1))

# Analysis defaults (normalized units: D = 1, noise = 1).
DEFAULT_ETA = 1.0
DEFAULT_MAX_NEIGHBOR_DISTANCE = 1.0
DEFAULT_RINGS = 200
DEFAULT_POWER_MARGIN = 1e-3
MIN_PATH_LOSS_EXPONENT = 2.0

# Simulation defaults.
DEFAULT_NODE_COUNT = 4000
DEFAULT_SEED = 0
DEFAULT_K = 2
DEFAULT_GAMMA = 3.0
DEFAULT_F = 0.5
DEFAULT_K_SWEEP_REFERENCE_K = 2
DEFAULT_K_SWEEP_F = 0.9
RNG_IDENTITY = "numpy.random.PCG64"

# Exact max-clique search refuses graphs above this many nodes.
CLIQUE_NODE_BUDGET = 200

# BFS oracle default search radius (hops) beyond the closed-form distance.
BFS_RADIUS_SLACK = 2

CSV_METADATA_PREFIX = "#"

# Exit codes. 0/1/2 are the documented CLI contract; the rest follow sysexits.h
# where the platform exposes them.
_EX_SOFTWARE_FALLBACK = 70

EXIT_CODE_OK = 0
EXIT_CODE_FAILURE = 1
EXIT_CODE_USAGE = 2
EXIT_CODE_SOFTWARE = getattr(os, "EX_SOFTWARE", _EX_SOFTWARE_FALLBACK)
UNIX_SIGNAL_EXIT_OFFSET = 128


@unique
class OutputFormat(str, Enum):
    """File formats accepted by ``--format``."""

    CSV = "csv"
    JSON = "json"


@unique
class SweepAxis(str, Enum):
    """Parameters ``sweep --over`` can vary."""

    K = "k"
    F = "f"
    NODES = "nodes"


# Command defaults applied when neither the CLI nor the config file sets a key.
DEFAULT_BETA = 1.0
DEFAULT_EXTENT_SIDE = 30
DEFAULT_JOBS = 1
DEFAULT_FEASIBILITY_GAMMAS: tuple[float, ...] = (2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0)
DEFAULT_FEASIBILITY_KS: tuple[int, ...] = tuple(range(1, 11))
DEFAULT_SWEEP_KS: tuple[int, ...] = (2, 3, 4, 5, 6)
DEFAULT_SWEEP_FS: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_SWEEP_NODES: tuple[int, ...] = (500, 1000, 2000, 4000)
STDOUT_PATH = "-"
