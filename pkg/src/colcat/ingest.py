"""Reading delimited text files into columns of raw, uncoerced strings.

Cells are kept byte-for-byte as the source fields after RFC 4180 delimiter
and quote handling: no trimming, no numeric or null coercion. Deciding what a
cell means is the recognizer machines' job, never the reader's.
"""

from __future__ import annotations

import csv
import io
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ColcatError, RaggedRowError


@dataclass(frozen=True)
class DataColumn:
    """A named column: ordered raw cells plus per-value occurrence tallies."""

    name: str
    cells: tuple[str, ...]
    tallies: dict[str, int] = field(compare=False)

    @classmethod
    def from_cells(cls, name: str, cells) -> "DataColumn":
        cells = tuple(cells)
        return cls(name, cells, dict(Counter(cells)))

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def n_unique(self) -> int:
        return len(self.tallies)


@dataclass(frozen=True)
class DataTable:
    """Equal-length columns with unique names, read from one file."""

    relation_name: str
    columns: tuple[DataColumn, ...]

    @property
    def n_rows(self) -> int:
        return self.columns[0].size if self.columns else 0

    def column(self, name: str) -> DataColumn:
        for col in self.columns:
            if col.name == name:
                return col
        raise KeyError(name)


def _decode(raw: bytes, source: str) -> str:
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError:
        warnings.warn(
            f"{source}: invalid UTF-8 bytes replaced with U+FFFD",
            UnicodeWarning,
            stacklevel=3,
        )
        return raw.decode("utf-8-sig", errors="replace")


def read_table(path, delimiter: str = ",", has_header: bool = True) -> DataTable:
    """Read an RFC 4180 delimited file into a :class:`DataTable`.

    Quoted fields are unescaped, embedded newlines inside quotes are kept,
    empty fields stay as empty strings, and a trailing empty line is ignored.
    Raises :class:`RaggedRowError` when a row's field count disagrees with
    the header row's.
    """
    path = Path(path)
    text = _decode(path.read_bytes(), str(path))
    table = parse_delimited(text, delimiter=delimiter, has_header=has_header)
    return DataTable(path.stem, table.columns)


def parse_delimited(
    text: str, delimiter: str = ",", has_header: bool = True
) -> DataTable:
    """Parse delimited text already in memory; see :func:`read_table`."""
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    names: list[str] | None = None
    rows: list[list[str]] = []
    for row in reader:
        if names is None:
            if not row:
                continue  # leading blank line before the header
            if has_header:
                names = row
                continue
            names = [f"col_{i}" for i in range(len(row))]
        if row == [] and len(names) == 1:
            row = [""]  # a blank line is an empty field in a one-column file
        if len(row) != len(names):
            raise RaggedRowError(reader.line_num, len(names), len(row))
        rows.append(row)
    if names is None:
        raise ColcatError("file has no header row")
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ColcatError(f"duplicate column names: {', '.join(dupes)}")
    columns = tuple(
        DataColumn.from_cells(name, (row[i] for row in rows))
        for i, name in enumerate(names)
    )
    return DataTable("table", columns)


def to_csv(table: DataTable, delimiter: str = ",") -> str:
    """Serialize a table back to RFC 4180 text (LF line endings)."""
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow([col.name for col in table.columns])
    for i in range(table.n_rows):
        writer.writerow([col.cells[i] for col in table.columns])
    return buf.getvalue()


def write_csv(table: DataTable, path, delimiter: str = ",") -> None:
    Path(path).write_text(to_csv(table, delimiter), encoding="utf-8")
