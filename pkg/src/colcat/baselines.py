"""Behavioral reimplementations of the heuristic competitor methods.

These mimic what the upstream tools do to a column, including the coercions
their dataframe parsers apply (sentinels breaking integer parsing but being
swallowed by float parsing, no date-with-time support, and so on). They are
reimplementations of documented behavior, not wrappers over the original
scripts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .config import MISSING_VOCABULARY
from .inference import column_type_posterior
from .ingest import DataColumn

_INT_RE = re.compile(r"^[+-]?\d+$")
# Date-only numeric formats: no time part, no textual months.
_NAIVE_DATE_RES = (
    re.compile(r"^\d{4}-\d{2}-\d{2}$"),
    re.compile(r"^\d{1,2}/\d{1,2}/\d{4}$"),
)
_ISO_DATETIME_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}$")

_SENTINELS = frozenset(MISSING_VOCABULARY)


@dataclass(frozen=True)
class BotParams:
    """Bot thresholds: unique-count caps for integers/strings and the
    minimum occurrence count for a value to be kept. Expected ranges are
    T_int >= 10, T_str >= 25, value_min_count >= 1."""

    t_int: int = 10
    t_str: int = 25
    value_min_count: int = 5


@dataclass(frozen=True)
class OpenMLParams:
    """csv2arff unique-count threshold for nominal columns (default 10)."""

    t_unique: int = 10


def _parses_int(cell: str) -> bool:
    return bool(_INT_RE.match(cell.strip()))


def _parses_float(cell: str) -> bool:
    try:
        float(cell.strip())
    except ValueError:
        return False
    return True


def naive_parse_type(column: DataColumn) -> str:
    """Emulated dataframe-parser verdict: integer, float, date-limited, string.

    Integer only if every cell is an integer literal (a single sentinel breaks
    it, as NA coercion forces floats upstream). Float tolerates sentinels.
    Date detection covers date-only numeric formats, never times or textual
    months.
    """
    uniques = list(column.tallies)
    if all(_parses_int(v) for v in uniques):
        return "integer"
    non_sentinel = [v for v in uniques if v not in _SENTINELS]
    if non_sentinel and all(_parses_float(v) for v in non_sentinel):
        return "float"
    if non_sentinel and all(
        any(rx.match(v.strip()) for rx in _NAIVE_DATE_RES) for v in non_sentinel
    ):
        return "date-limited"
    return "string"


def _int_gap_signal(column: DataColumn) -> bool:
    """Mean gap between consecutive sorted unique integers < their mean."""
    ints = sorted({int(v.strip()) for v in column.tallies})
    if len(ints) < 2:
        return False
    gaps = [b - a for a, b in zip(ints, ints[1:])]
    mean_gap = sum(gaps) / len(gaps)
    mean_val = sum(ints) / len(ints)
    return mean_gap < mean_val


def bot_infer(column: DataColumn, params: BotParams = BotParams()) -> str:
    """Bot's type call: unique-count heuristics over the naive parse."""
    parsed = naive_parse_type(column)
    u = column.n_unique
    if parsed == "integer":
        if u < 11:
            return "categorical"
        if u <= params.t_int and _int_gap_signal(column):
            return "categorical"
        return "integer"
    if parsed == "string":
        if u < params.t_str:
            return "categorical"
        return "string"
    if parsed == "date-limited":
        return "date"
    return parsed


def bot_values(column: DataColumn, params: BotParams = BotParams()) -> frozenset[str]:
    """Unique values occurring at least ``value_min_count`` times."""
    return frozenset(
        v for v, c in column.tallies.items() if c >= params.value_min_count
    )


Disambiguator = Callable[[DataColumn], str]


def posterior_numeric_disambiguator(
    machines=None, type_prior=None, row_weights=None
) -> Disambiguator:
    """Integer-vs-float call from the column posterior, cached per column."""
    cache: dict[int, str] = {}

    def call(column: DataColumn) -> str:
        key = id(column)
        if key not in cache:
            p = column_type_posterior(column, machines, type_prior, row_weights)
            cache[key] = "float" if p["float"] >= p["integer"] else "integer"
        return cache[key]

    return call


def openml_infer(
    column: DataColumn,
    params: OpenMLParams = OpenMLParams(),
    numeric_disambiguator: Disambiguator | None = None,
) -> str:
    """csv2arff's call: nominal below the unique threshold, then numeric,
    then string. There is no date outcome."""
    if column.n_unique <= params.t_unique:
        return "categorical"
    non_sentinel = [v for v in column.tallies if v not in _SENTINELS]
    if non_sentinel and all(_parses_float(v) for v in non_sentinel):
        disambiguate = numeric_disambiguator or posterior_numeric_disambiguator()
        return disambiguate(column)
    return "string"


def openml_values(column: DataColumn) -> frozenset[str]:
    """All unique values except missing-vocabulary sentinels."""
    return frozenset(v for v in column.tallies if v not in _SENTINELS)


def weka_infer(
    column: DataColumn,
    numeric_disambiguator: Disambiguator | None = None,
) -> str:
    """Weka converter's call: numeric, exact ISO-8601 date, else nominal."""
    uniques = list(column.tallies)
    if uniques and all(_parses_float(v) for v in uniques):
        disambiguate = numeric_disambiguator or posterior_numeric_disambiguator()
        return disambiguate(column)
    if uniques and all(_ISO_DATETIME_RE.match(v) for v in uniques):
        return "date"
    return "categorical"


def weka_values(
    column: DataColumn,
    numeric_disambiguator: Disambiguator | None = None,
) -> frozenset[str]:
    """All unique values when nominal; empty for numeric and date columns."""
    if weka_infer(column, numeric_disambiguator) == "categorical":
        return frozenset(column.tallies)
    return frozenset()
