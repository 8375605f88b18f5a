"""ARFF data-dictionary emission plus an independent grammar checker.

One attribute is declared per column from its inference: categorical columns
become nominal attributes listing the identified values, integer and float
become NUMERIC, string becomes STRING, and date becomes a DATE attribute with
the ISO format. A categorical column with no clean values (all cells are
sentinels or anomalies) cannot declare a nominal list and falls back to
STRING. In the data section, cells judged missing or anomalous (and
any missing-vocabulary sentinel) are written as ``?``; clean date cells are
rewritten into the declared ISO format. Output uses LF separators and is
byte-deterministic.

``parse_arff`` is a separate reader used to validate emitted text; it shares
no code with the emitter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from .categorical import ColumnInference
from .config import CLEAN, MISSING_VOCABULARY
from .errors import ArffError
from .ingest import DataTable

_QUOTE_TRIGGERS = set(" ,{}%'\"")
_DATE_FORMAT_DECL = "yyyy-MM-dd'T'HH:mm:ss"
_DATE_PARSE_FORMATS = (
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d",
    "%d/%m/%Y",
    "%m/%d/%Y",
    "%d %B %Y",
    "%d %b %Y",
    "%B %d %Y",
    "%b %d %Y",
    "%H:%M:%S",
    "%B",
    "%b",
    "%Y",
)
_ISO_VALUE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}$")


def _needs_quoting(value: str) -> bool:
    if value == "":
        return True
    return any(ch in _QUOTE_TRIGGERS or ch == "\\" or ord(ch) < 0x20 for ch in value)


def _escape(value: str) -> str:
    """Quote a token when needed, with backslash escaping inside quotes."""
    if not _needs_quoting(value):
        return value
    out = []
    for ch in value:
        if ch in ("\\", "'"):
            out.append("\\" + ch)
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    return "'" + "".join(out) + "'"


def _iso_date(cell: str) -> str | None:
    text = cell.strip()
    for fmt in _DATE_PARSE_FORMATS:
        try:
            return datetime.strptime(text, fmt).strftime("%Y-%m-%dT%H:%M:%S")
        except ValueError:
            continue
    return None


def _numeric_token(cell: str) -> str:
    # machines tolerate one padding space and the U+2212 minus; ARFF does not
    return cell.strip().replace("−", "-")


def excluded_values(inference: ColumnInference) -> frozenset[str]:
    """Unique values rendered as '?': non-clean rows plus vocabulary sentinels."""
    non_clean = {rp.value for rp in inference.row_posteriors if rp.label != CLEAN}
    sentinels = {
        rp.value for rp in inference.row_posteriors if rp.value in MISSING_VOCABULARY
    }
    return frozenset(non_clean | sentinels)


def emit_arff(
    table: DataTable,
    inferences: Sequence[ColumnInference],
    header_only: bool = False,
    relation: str | None = None,
) -> str:
    """Render the table and its per-column inferences as ARFF text."""
    if len(inferences) != len(table.columns):
        raise ArffError("one inference per column is required")
    names = [col.name for col in table.columns]
    if len(set(names)) != len(names):
        raise ArffError("duplicate column names")

    lines = [f"@RELATION {_escape(relation or table.relation_name)}", ""]
    renderers = []
    for col, inf in zip(table.columns, inferences):
        skip = excluded_values(inf)
        if inf.predicted_type == "categorical" and inf.values.values:
            decl = "{" + ",".join(_escape(v.value) for v in inf.values.values) + "}"
            renderers.append(lambda cell, skip=skip: "?" if cell in skip else _escape(cell))
        elif inf.predicted_type in ("integer", "float"):
            decl = "NUMERIC"
            renderers.append(
                lambda cell, skip=skip: "?" if cell in skip else _numeric_token(cell)
            )
        elif inf.predicted_type == "date":
            decl = f'DATE "{_DATE_FORMAT_DECL}"'

            def render_date(cell, skip=skip):
                if cell in skip:
                    return "?"
                iso = _iso_date(cell)
                return iso if iso is not None else "?"

            renderers.append(render_date)
        else:
            decl = "STRING"
            renderers.append(lambda cell, skip=skip: "?" if cell in skip else _escape(cell))
        lines.append(f"@ATTRIBUTE {_escape(col.name)} {decl}")
    if not header_only:
        lines.append("")
        lines.append("@DATA")
        for i in range(table.n_rows):
            lines.append(
                ",".join(
                    render(col.cells[i])
                    for col, render in zip(table.columns, renderers)
                )
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Grammar checker
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArffAttribute:
    name: str
    kind: str  # "numeric" | "string" | "date" | "nominal"
    values: tuple[str, ...] = ()
    date_format: str = ""


@dataclass(frozen=True)
class ArffDocument:
    relation: str
    attributes: tuple[ArffAttribute, ...]
    rows: tuple[tuple[str, ...], ...]


def _scan_token(text: str, pos: int) -> tuple[str, int]:
    """Read one possibly-quoted token starting at ``pos``; returns (token,
    position after it, trailing spaces consumed)."""
    while pos < len(text) and text[pos] == " ":
        pos += 1
    if pos < len(text) and text[pos] == "'":
        out = []
        i = pos + 1
        while i < len(text):
            ch = text[i]
            if ch == "\\" and i + 1 < len(text):
                nxt = text[i + 1]
                out.append({"n": "\n", "r": "\r", "t": "\t"}.get(nxt, nxt))
                i += 2
                continue
            if ch == "'":
                i += 1
                while i < len(text) and text[i] == " ":
                    i += 1
                return "".join(out), i
            out.append(ch)
            i += 1
        raise ArffError("unterminated quoted token")
    end = pos
    while end < len(text) and text[end] not in " ,}":
        end += 1
    token = text[pos:end]
    while end < len(text) and text[end] == " ":
        end += 1
    return token, end


def _split_row(line: str) -> list[str]:
    fields = []
    pos = 0
    while True:
        token, pos = _scan_token(line, pos)
        fields.append(token)
        if pos >= len(line):
            break
        if line[pos] != ",":
            raise ArffError(f"unexpected character {line[pos]!r} in data row")
        pos += 1
    return fields


def _parse_nominal_spec(spec: str) -> tuple[str, ...]:
    if not spec.startswith("{") or not spec.endswith("}"):
        raise ArffError(f"malformed nominal specification: {spec!r}")
    body = spec[1:-1]
    values = []
    pos = 0
    while pos <= len(body):
        token, pos = _scan_token(body, pos)
        values.append(token)
        if pos >= len(body):
            break
        if body[pos] != ",":
            raise ArffError(f"unexpected character in nominal list: {body[pos]!r}")
        pos += 1
    if not values or values == [""]:
        raise ArffError("nominal attribute with empty value list")
    if len(set(values)) != len(values):
        raise ArffError("nominal attribute with duplicate values")
    return tuple(values)


def parse_arff(text: str) -> ArffDocument:
    """Parse and validate ARFF text; raises :class:`ArffError` on problems."""
    relation: str | None = None
    attributes: list[ArffAttribute] = []
    rows: list[tuple[str, ...]] = []
    in_data = False
    for raw in text.split("\n"):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        upper = line.upper()
        if upper.startswith("@RELATION"):
            token, _ = _scan_token(line[len("@RELATION") :].strip(), 0)
            relation = token
        elif upper.startswith("@ATTRIBUTE"):
            rest = line[len("@ATTRIBUTE") :].strip()
            name, pos = _scan_token(rest, 0)
            spec = rest[pos:].strip()
            if not name:
                raise ArffError("attribute without a name")
            if spec.startswith("{"):
                attributes.append(
                    ArffAttribute(name, "nominal", _parse_nominal_spec(spec))
                )
            elif spec.upper() in ("NUMERIC", "REAL", "INTEGER"):
                attributes.append(ArffAttribute(name, "numeric"))
            elif spec.upper() == "STRING":
                attributes.append(ArffAttribute(name, "string"))
            elif spec.upper().startswith("DATE"):
                fmt = spec[4:].strip().strip('"')
                attributes.append(ArffAttribute(name, "date", date_format=fmt))
            else:
                raise ArffError(f"unknown attribute kind: {spec!r}")
        elif upper.startswith("@DATA"):
            in_data = True
        elif in_data:
            fields = _split_row(raw)
            if len(fields) != len(attributes):
                raise ArffError(
                    f"row has {len(fields)} fields, expected {len(attributes)}"
                )
            for value, attr in zip(fields, attributes):
                _check_value(value, attr)
            rows.append(tuple(fields))
        else:
            raise ArffError(f"unexpected line outside data section: {line!r}")
    if relation is None:
        raise ArffError("missing @RELATION declaration")
    if not attributes:
        raise ArffError("no @ATTRIBUTE declarations")
    return ArffDocument(relation, tuple(attributes), tuple(rows))


def _check_value(value: str, attr: ArffAttribute) -> None:
    if value == "?":
        return
    if attr.kind == "numeric":
        try:
            float(value)
        except ValueError:
            raise ArffError(f"non-numeric value {value!r} in {attr.name}") from None
    elif attr.kind == "nominal":
        if value not in attr.values:
            raise ArffError(f"value {value!r} not declared for {attr.name}")
    elif attr.kind == "date":
        if not _ISO_VALUE_RE.match(value):
            raise ArffError(f"date value {value!r} does not match the ISO format")
