"""Central configuration: type tags, missing-value vocabulary, machine parameters.

Every numeric parameter of the built-in recognizer machines lives in
``MachineParams`` so the machines can be recalibrated without touching the
construction code. The defaults below were hand-set so that, per cell,

* the integer machine dominates the float machine on bare digit runs,
* the float machine dominates the string machine on decimal notation,
* the string machine dominates the anomaly machine on any ordinary text,
* the missing machine dominates everything on vocabulary sentinels.
"""

from __future__ import annotations

from dataclasses import dataclass

# Column types in tie-break order (earlier wins on exactly equal posterior).
COLUMN_TYPES: tuple[str, ...] = ("date", "float", "integer", "string")

# Five-type space, again in tie-break order.
ALL_TYPES: tuple[str, ...] = ("categorical", "date", "float", "integer", "string")

# Row types: a cell is clean (consistent with the column type), a missing-data
# sentinel, or an anomaly.
ROW_TYPES: tuple[str, ...] = ("clean", "missing", "anomaly")

CLEAN, MISSING, ANOMALY = ROW_TYPES

# Sentinel strings conventionally used to encode absent data. The empty string
# must be present; order is only cosmetic.
MISSING_VOCABULARY: tuple[str, ...] = (
    "",
    "NULL",
    "null",
    "Null",
    "NA",
    "N/A",
    "n/a",
    "NaN",
    "nan",
    "NAN",
    "-",
    "?",
    "#N/A",
    "None",
    "none",
    "missing",
    " ",
)

DEFAULT_TYPE_PRIOR: dict[str, float] = {t: 0.25 for t in COLUMN_TYPES}

# Weight of each row type inside the per-cell observation mixture. Clean must
# dominate so that sentinels flip to missing only when the type machine itself
# rejects them (or scores them far below the missing machine).
DEFAULT_ROW_WEIGHTS: dict[str, float] = {CLEAN: 0.98, MISSING: 0.01, ANOMALY: 0.01}


@dataclass(frozen=True)
class MachineParams:
    """Numeric knobs for the built-in machines (all probabilities).

    ``*_cont`` values are geometric continue-probabilities per character;
    the rest are branch weights for optional or alternative grammar parts.
    """

    # one optional padding space around numeric forms
    lead_space: float = 0.02
    trail_space: float = 0.005
    # optional +/- (and U+2212) before a number
    sign: float = 0.03
    # digit-run continuation (integer part, fraction, slash-date years...)
    digit_cont: float = 0.9
    # float grammar: digits-first mantissa vs ".5"-style mantissa
    float_int_branch: float = 0.95
    # probability of a fractional part after the integer part
    float_frac: float = 0.35
    # probability of an exponent suffix, its sign, its digit continuation
    float_exp: float = 0.05
    float_exp_sign: float = 0.2
    float_exp_digit_cont: float = 0.75
    # catch-all machines: per-character continue probability. The string value
    # must strictly exceed the anomaly value so ordinary text prefers string.
    string_char_cont: float = 0.995
    anomaly_char_cont: float = 0.95
    # bare-year template branch weights (1800-1899, 1900-1999, 2000-2099, 2100)
    year_18xx: float = 0.30
    year_19xx: float = 0.35
    year_20xx: float = 0.30
    year_2100: float = 0.05


DEFAULT_MACHINE_PARAMS = MachineParams()
