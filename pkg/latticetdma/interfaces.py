"""Protocol definitions for pluggable latticetdma collaborators.

Protocols give structural typing without inheritance, so tests and callers
can inject their own exporter (for example, an in-memory one) into
:class:`latticetdma.render.OutputRenderer`.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from .models import ResultTable


class Exporter(Protocol):
    """Component that persists a :class:`ResultTable`.

    Examples:
        >>> class MemoryExporter:
        ...     def __init__(self) -> None:
        ...         self.tables = []
        ...     def export(self, table, output_path):
        ...         self.tables.append((table, output_path))

    """

    def export(self, table: ResultTable, output_path: str | None) -> None:
        """Write ``table`` to ``output_path``; ``None`` or ``-`` means stdout.

        Raises:
            OSError: If the destination cannot be written.

        """
