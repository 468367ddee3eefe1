"""Exception hierarchy for latticetdma.

Infeasible SINR configurations are reported as values (``feasible`` flags,
``None`` power thresholds); the exceptions below are reserved for inputs that
violate an operation's preconditions or for oracles that refuse to answer.
"""

from __future__ import annotations


class LatticeTDMAError(Exception):
    """Base class for every error raised by latticetdma."""


class InvalidArgumentError(LatticeTDMAError, ValueError):
    """Raised when an argument violates an operation's precondition."""


class DomainError(InvalidArgumentError):
    """Raised when a closed form is evaluated outside its domain (e.g. γ ≤ 2)."""


class ConfigurationError(LatticeTDMAError):
    """Raised when a geometric configuration makes a sum ill-defined."""


class UndefinedGainError(LatticeTDMAError, ZeroDivisionError):
    """Raised when a transmitter and a receiver share a position."""


class OracleFailureError(LatticeTDMAError):
    """Raised when the BFS distance oracle exhausts its search radius."""


class CliqueBudgetError(LatticeTDMAError):
    """Raised when exact max-clique search is refused for graph size."""


class ConfigSpecError(LatticeTDMAError, ValueError):
    """Raised when a run configuration cannot be parsed or validated."""


class ScheduleFileError(LatticeTDMAError, ValueError):
    """Raised when a schedule CSV cannot be read back."""
