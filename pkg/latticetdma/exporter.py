"""CSV and JSON export of result tables, and schedule CSV loading.

CSV files start with a block of ``#key=value`` metadata lines (summary
entries are prefixed ``summary.``), followed by a header row and the data
rows. Floats are written with ``repr`` so that values read back compare equal
to the ones computed. Files are replaced atomically.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING, Any

from rich.console import Console

from .constants import CSV_METADATA_PREFIX, STDOUT_PATH, LatticeKind, OutputFormat
from .errors import ScheduleFileError
from .interfaces import Exporter
from .lattice import LatticeCoord, NetworkExtent
from .scheduler import Schedule

if TYPE_CHECKING:
    from .models import ResultTable, Scalar

SUMMARY_PREFIX = "summary."


def _cell(value: Scalar) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_atomic(output_path: str, text: str) -> None:
    """Write ``text`` to ``output_path`` through a temporary file and ``os.replace``.

    Parent directories are created; a reader never sees a partial file.
    """
    target = Path(output_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        Path(temp_name).replace(target)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def _deliver(console: Console, table: ResultTable, text: str, output_path: str | None) -> None:
    if output_path is None or output_path == STDOUT_PATH:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    write_atomic(output_path, text)
    console.print(f"[green]✓ Wrote {table.name} ({len(table)} rows) to {output_path}[/green]")


class CSVExporter(Exporter):
    """Export tables as CSV with a ``#key=value`` metadata header.

    Attributes:
        console: Rich console for the success message (stderr by convention).

    """

    __slots__ = ("console",)

    def __init__(self, console: Console | None = None) -> None:
        self.console = console or Console(stderr=True)

    def render(self, table: ResultTable) -> str:
        """Return the CSV text of ``table``."""
        buffer = io.StringIO()
        for key, value in table.metadata.items():
            buffer.write(f"{CSV_METADATA_PREFIX}{key}={_cell(value)}\n")
        for key, value in (table.summary or {}).items():
            buffer.write(f"{CSV_METADATA_PREFIX}{SUMMARY_PREFIX}{key}={_cell(value)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        writer.writerows([_cell(value) for value in row] for row in table.rows)
        return buffer.getvalue()

    def export(self, table: ResultTable, output_path: str | None) -> None:
        """Write the CSV text of ``table`` to ``output_path`` or stdout.

        Raises:
            OSError: If the file cannot be written.

        """
        _deliver(self.console, table, self.render(table), output_path)


class JSONExporter(Exporter):
    """Export tables as ``{"metadata", "columns", "rows"[, "summary"]}`` JSON."""

    __slots__ = ("console",)

    def __init__(self, console: Console | None = None) -> None:
        self.console = console or Console(stderr=True)

    def render(self, table: ResultTable) -> str:
        """Return the JSON text of ``table``; non-finite floats become ``null``."""
        payload = _finite(table.to_dict())
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

    def export(self, table: ResultTable, output_path: str | None) -> None:
        _deliver(self.console, table, self.render(table), output_path)


def _finite(value: Any) -> Any:  # noqa: ANN401
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_finite(item) for item in value]
    return value


def exporter_for(output_format: OutputFormat, console: Console | None = None) -> CSVExporter | JSONExporter:
    """Return the exporter writing ``output_format``."""
    if output_format is OutputFormat.JSON:
        return JSONExporter(console)
    return CSVExporter(console)


def read_metadata_csv(path: str | Path) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Read a CSV written by :class:`CSVExporter`.

    Returns:
        ``(metadata, header, rows)`` as strings.

    Raises:
        ScheduleFileError: If the file cannot be read or has no header row.

    """
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"Cannot read schedule file '{source}': {exc.strerror or exc}"
        raise ScheduleFileError(msg) from exc

    metadata: dict[str, str] = {}
    body: list[str] = []
    for line in text.splitlines():
        if line.startswith(CSV_METADATA_PREFIX):
            key, sep, value = line[len(CSV_METADATA_PREFIX) :].partition("=")
            if sep:
                metadata[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if not body:
        msg = f"Schedule file '{source}' has no header row"
        raise ScheduleFileError(msg)
    reader = csv.reader(body)
    header = [cell.strip() for cell in next(reader)]
    return metadata, header, [row for row in reader if row]


def _file_extent(metadata: dict[str, str], schedule: Schedule, path: str | Path) -> NetworkExtent:
    label = metadata.get("extent")
    if label is not None:
        width, _, height = label.lower().partition("x")
        try:
            return NetworkExtent.box(int(width), int(height or width))
        except ValueError as exc:
            msg = f"Schedule file '{path}' has invalid extent metadata '{label}'"
            raise ScheduleFileError(msg) from exc
    nodes = NetworkExtent.from_nodes(schedule.slot_of)
    if nodes.is_empty:
        return nodes
    x_min, x_max, y_min, y_max = nodes.bounds()
    return NetworkExtent.box(x_max - x_min + 1, y_max - y_min + 1, LatticeCoord(x_min, y_min))


def load_schedule_csv(
    path: str | Path,
    *,
    kind: LatticeKind,
    k: int,
    extent: NetworkExtent | None = None,
) -> tuple[Schedule, NetworkExtent]:
    """Load an ``x,y,slot`` schedule file and the extent it must cover.

    ``kind``, ``k`` and ``frame_length`` come from the metadata block when it
    has them; ``kind`` and ``k`` fall back to the arguments, and the frame
    length to ``max(slot) + 1``. The extent is ``extent`` when given, else the
    ``extent`` metadata (a box at the origin), else the bounding box of the
    rows.

    Raises:
        ScheduleFileError: On a missing column, a non-integer cell or
            unusable metadata.

    """
    metadata, header, rows = read_metadata_csv(path)
    try:
        columns = [header.index(name) for name in ("x", "y", "slot")]
    except ValueError as exc:
        msg = f"Schedule file '{path}' must have columns x,y,slot (got {','.join(header)})"
        raise ScheduleFileError(msg) from exc

    parsed: list[tuple[int, int, int]] = []
    for lineno, row in enumerate(rows, start=1):
        try:
            x, y, slot = (int(row[column]) for column in columns)
        except (IndexError, ValueError) as exc:
            msg = f"Schedule file '{path}': data row {lineno} is not three integers: {row}"
            raise ScheduleFileError(msg) from exc
        parsed.append((x, y, slot))

    try:
        file_kind = LatticeKind(metadata["kind"]) if "kind" in metadata else kind
        file_k = int(metadata["k"]) if "k" in metadata else k
        frame = int(metadata["frame_length"]) if "frame_length" in metadata else None
        schedule = Schedule.from_rows(parsed, kind=file_kind, k=file_k, frame_length=frame)
    except ValueError as exc:
        msg = f"Schedule file '{path}' has invalid metadata: {exc}"
        raise ScheduleFileError(msg) from exc
    return schedule, extent if extent is not None else _file_extent(metadata, schedule, path)
