"""Identifying the possible values of a categorical column.

The values are the column's clean entries: unique values whose row-type
posterior argmax under the column's encoding type is clean. Values are
reported verbatim (no case folding or trimming) so distinct surface forms
stay distinct. ``unique_baseline`` is the naive alternative that keeps every
unique value, sentinels included.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import CLEAN
from .inference import CleanInfo, RowPosterior, clean_entries, row_type_posteriors
from .ingest import DataColumn


@dataclass(frozen=True)
class ValueEntry:
    value: str
    count: int
    clean_posterior: float


@dataclass(frozen=True)
class ExcludedEntry:
    value: str
    count: int
    label: str  # "missing" or "anomaly"


@dataclass(frozen=True)
class CategoricalValueReport:
    """Accepted categorical values and the unique values excluded from them.

    The two lists partition the column's unique values. Values are ordered by
    descending count, then lexicographically, so output is deterministic.
    """

    values: tuple[ValueEntry, ...]
    excluded: tuple[ExcludedEntry, ...]

    @property
    def value_set(self) -> frozenset[str]:
        return frozenset(v.value for v in self.values)

    def to_dict(self) -> dict:
        return {
            "values": [
                {"value": v.value, "count": v.count, "clean_posterior": v.clean_posterior}
                for v in self.values
            ],
            "excluded": [
                {"value": e.value, "count": e.count, "label": e.label}
                for e in self.excluded
            ],
        }


def _ordered(column: DataColumn, names) -> list[str]:
    return sorted(names, key=lambda v: (-column.tallies[v], v))


def build_value_report(
    column: DataColumn,
    row_posteriors: list[RowPosterior],
    clean_info: CleanInfo,
) -> CategoricalValueReport:
    """Assemble a report from already-computed row posteriors."""
    by_value = {rp.value: rp for rp in row_posteriors}
    values = tuple(
        ValueEntry(v, column.tallies[v], by_value[v].probabilities[CLEAN])
        for v in _ordered(column, clean_info.values)
    )
    excluded = tuple(
        ExcludedEntry(v, column.tallies[v], by_value[v].label)
        for v in _ordered(column, set(column.tallies) - clean_info.values)
    )
    return CategoricalValueReport(values, excluded)


def categorical_values(
    column: DataColumn,
    base_type: str,
    machines=None,
    row_weights=None,
) -> CategoricalValueReport:
    """Values of a categorical column encoded as ``base_type`` cells."""
    if base_type not in ("integer", "string"):
        raise ValueError(f"base type must be integer or string, got {base_type!r}")
    rows = row_type_posteriors(column, base_type, machines, row_weights)
    info = clean_entries(column, base_type, machines, row_weights)
    return build_value_report(column, rows, info)


def unique_baseline(column: DataColumn) -> CategoricalValueReport:
    """Every unique value taken as a categorical value; nothing excluded."""
    values = tuple(
        ValueEntry(v, column.tallies[v], 1.0) for v in _ordered(column, column.tallies)
    )
    return CategoricalValueReport(values, ())
