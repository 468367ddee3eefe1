"""Tabular result model shared by the commands, exporters and renderers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import InvalidArgumentError

Scalar = int | float | str | bool | None


@dataclass(frozen=True, slots=True)
class ResultTable:
    """Named table of scalar rows with a metadata block.

    Attributes:
        name: Table kind (``schedule``, ``violations``, ``rho`` …).
        columns: Column names, in output order.
        rows: Data rows, each as long as ``columns``.
        metadata: ``key=value`` pairs describing how the rows were produced.
        summary: Optional aggregate record emitted after the rows.

    """

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Scalar, ...], ...] = ()
    metadata: dict[str, Scalar] = field(default_factory=dict)
    summary: dict[str, Scalar] | None = None

    def __post_init__(self) -> None:
        width = len(self.columns)
        for position, row in enumerate(self.rows):
            if len(row) != width:
                msg = f"Row {position} of table '{self.name}' has {len(row)} values, expected {width}"
                raise InvalidArgumentError(msg)

    def __len__(self) -> int:
        return len(self.rows)

    def with_metadata(self, **extra: Scalar) -> ResultTable:
        """Return a copy whose metadata also holds ``extra`` (new keys last)."""
        return replace(self, metadata={**self.metadata, **extra})

    def column(self, name: str) -> list[Scalar]:
        """Return the values of one column.

        Raises:
            KeyError: If ``name`` is not a column.

        """
        try:
            position = self.columns.index(name)
        except ValueError as exc:
            raise KeyError(name) from exc
        return [row[position] for row in self.rows]

    def to_dict(self) -> dict[str, object]:
        """Return the JSON export shape."""
        payload: dict[str, object] = {
            "metadata": dict(self.metadata),
            "columns": list(self.columns),
            "rows": [list(row) for row in self.rows],
        }
        if self.summary is not None:
            payload["summary"] = dict(self.summary)
        return payload
