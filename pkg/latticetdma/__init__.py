"""Message-free STDMA node scheduling for regular lattice networks.

latticetdma assigns TDMA slots to the nodes of hexagonal and square lattices
from their coordinates alone, checks the assignments against the k-hop
interference model, and evaluates them under the SINR model on randomly
perturbed deployments.

Examples:
    $ latticetdma schedule --kind hex --k 2 --extent 6x6
    $ latticetdma verify --kind square --k 1:5
    $ latticetdma simulate --kind hex --k 2 --gamma 3 --f 0.5 --seed 0:4 --out runs/hex.csv

Modules:
    lattice: Coordinates, distances, neighborhoods, embeddings, basis sections.
    scheduler: Slot formulas, schedule construction and verification.
    interference: Interference graphs, clique numbers, approximation ratios.
    sinr: SINR evaluation, interference bounds, feasibility region.
    deployment: Perturbed deployments and per-link SINR evaluation.
    experiments: Simulation pipeline and parameter sweeps.
    config: Run configuration and config-file grammar.
    reports: Result tables for export.
    exporter: CSV/JSON export and schedule loading.
    render: Human-readable summaries.
    cli: Command-line interface.

"""

from ._pkgmeta import get_package_info
from .constants import LatticeKind
from .deployment import Deployment, OperatingPoint, RhoReport, evaluate, generate, operating_point
from .errors import (
    CliqueBudgetError,
    ConfigSpecError,
    ConfigurationError,
    DomainError,
    InvalidArgumentError,
    LatticeTDMAError,
    OracleFailureError,
    ScheduleFileError,
    UndefinedGainError,
)
from .experiments import SimulationResult, simulate_point
from .exporter import CSVExporter, JSONExporter
from .interfaces import Exporter
from .interference import (
    CliqueReport,
    InterferenceGraph,
    approximation_ratio,
    brute_force_max_clique,
    build_interference_graph,
    clique_number_formula,
)
from .lattice import LatticeCoord, NetworkExtent, bfs_distance, embed, graph_distance, neighbors
from .models import ResultTable
from .render import OutputRenderer
from .scheduler import Schedule, VerificationReport, build_schedule, frame_length, slot_of, verify_schedule
from .sinr import FeasibilityRegion, SinrParams, feasibility, interference_bound, power_threshold, sinr_at

_package_info = get_package_info()

__version__ = _package_info.version
__license__ = _package_info.license

__all__ = [
    "CSVExporter",
    "CliqueBudgetError",
    "CliqueReport",
    "ConfigSpecError",
    "ConfigurationError",
    "Deployment",
    "DomainError",
    "Exporter",
    "FeasibilityRegion",
    "InterferenceGraph",
    "InvalidArgumentError",
    "JSONExporter",
    "LatticeCoord",
    "LatticeKind",
    "LatticeTDMAError",
    "NetworkExtent",
    "OperatingPoint",
    "OracleFailureError",
    "OutputRenderer",
    "ResultTable",
    "RhoReport",
    "Schedule",
    "ScheduleFileError",
    "SimulationResult",
    "SinrParams",
    "UndefinedGainError",
    "VerificationReport",
    "approximation_ratio",
    "bfs_distance",
    "brute_force_max_clique",
    "build_interference_graph",
    "build_schedule",
    "clique_number_formula",
    "embed",
    "evaluate",
    "feasibility",
    "frame_length",
    "generate",
    "graph_distance",
    "interference_bound",
    "neighbors",
    "operating_point",
    "power_threshold",
    "simulate_point",
    "sinr_at",
    "slot_of",
    "verify_schedule",
]
