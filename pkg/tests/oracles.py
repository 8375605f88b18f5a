"""Independent oracle implementations used to pin expected test values.

Everything here deliberately avoids the production code paths: machine
probabilities come from brute-force path enumeration rather than the forward
algorithm, posteriors are computed in direct probability space rather than
log space, gradients come from central finite differences, date-template
membership from regexes, and the Student-t tail from Simpson quadrature.
"""

from __future__ import annotations

import math
import re

from colcat.config import CLEAN, COLUMN_TYPES, MISSING, ANOMALY
from colcat.machines import TypeMachine

# ---------------------------------------------------------------------------
# Machine probability by path enumeration
# ---------------------------------------------------------------------------


def enumerate_prob(machine: TypeMachine, entry: str) -> float:
    """Probability of ``entry`` summed over every accepting path."""

    def walk(state: int, i: int) -> float:
        if i == len(entry):
            return machine.stop[state]
        total = 0.0
        for cc, p, dst in machine.transitions[state]:
            if cc.contains(entry[i]):
                total += (p / cc.size) * walk(dst, i + 1)
        return total

    return walk(0, 0)


def enumerate_log_prob(machine: TypeMachine, entry: str) -> float:
    p = enumerate_prob(machine, entry)
    return math.log(p) if p > 0.0 else float("-inf")


# ---------------------------------------------------------------------------
# Posteriors in direct probability space
# ---------------------------------------------------------------------------


def column_posterior_oracle(column, machines, type_prior, row_weights):
    """Straight-line mixture/product/normalize computation, linear space."""
    scores = {}
    for t in COLUMN_TYPES:
        s = type_prior[t]
        for value, count in column.tallies.items():
            mix = (
                row_weights[CLEAN] * enumerate_prob(machines[t], value)
                + row_weights[MISSING] * enumerate_prob(machines["missing"], value)
                + row_weights[ANOMALY] * enumerate_prob(machines["anomaly"], value)
            )
            s *= mix**count
        scores[t] = s
    norm = sum(scores.values())
    return {t: scores[t] / norm for t in COLUMN_TYPES}


def row_posterior_oracle(value, t, machines, row_weights):
    num = {
        CLEAN: row_weights[CLEAN] * enumerate_prob(machines[t], value),
        MISSING: row_weights[MISSING] * enumerate_prob(machines["missing"], value),
        ANOMALY: row_weights[ANOMALY] * enumerate_prob(machines["anomaly"], value),
    }
    norm = sum(num.values())
    return {k: v / norm for k, v in num.items()}


# ---------------------------------------------------------------------------
# Gradient by central finite differences
# ---------------------------------------------------------------------------


def finite_difference_grad(loss_fn, params, h: float = 1e-6):
    grads = []
    for i in range(len(params)):
        up = list(params)
        down = list(params)
        up[i] += h
        down[i] -= h
        grads.append((loss_fn(up) - loss_fn(down)) / (2 * h))
    return grads


# ---------------------------------------------------------------------------
# Date-template membership, written as regexes
# ---------------------------------------------------------------------------

_MONTHS = (
    "January|February|March|April|May|June|July|August|September|October|"
    "November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Oct|Nov|Dec"
)
_MM2 = r"(?:0[1-9]|1[0-2])"
_DD2 = r"(?:0[1-9]|[12]\d|3[01])"
_MMX = r"(?:[1-9]|0[1-9]|1[0-2])"
_DDX = r"(?:[1-9]|0[1-9]|[12]\d|3[01])"
_TIME = r"(?:[01]\d|2[0-3]):[0-5]\d:[0-5]\d"
_ISO = rf"\d{{4}}-{_MM2}-{_DD2}"

DATE_TEMPLATE_RES = tuple(
    re.compile(f"^{pattern}$")
    for pattern in (
        _ISO,
        f"{_ISO}T{_TIME}",
        f"{_ISO} {_TIME}",
        rf"{_DDX}/{_MMX}/\d{{4}}",
        rf"{_MMX}/{_DDX}/\d{{4}}",
        rf"{_DDX} (?:{_MONTHS}) \d{{4}}",
        rf"(?:{_MONTHS}) {_DDX} \d{{4}}",
        f"(?:{_MONTHS})",
        r"(?:1[89]\d\d|20\d\d|2100)",
        _TIME,
    )
)


def is_template_date(text: str) -> bool:
    return any(rx.match(text) for rx in DATE_TEMPLATE_RES)


# ---------------------------------------------------------------------------
# Student-t two-sided p-value by Simpson quadrature over the density
# ---------------------------------------------------------------------------


def t_two_sided_p(t: float, dof: int, steps: int = 20000) -> float:
    t = abs(t)
    const = math.gamma((dof + 1) / 2.0) / (
        math.sqrt(dof * math.pi) * math.gamma(dof / 2.0)
    )

    def pdf(x: float) -> float:
        return const * (1.0 + x * x / dof) ** (-(dof + 1) / 2.0)

    if steps % 2:
        steps += 1
    h = t / steps
    total = pdf(0.0) + pdf(t)
    for i in range(1, steps):
        total += pdf(i * h) * (4 if i % 2 else 2)
    central = 2.0 * (total * h / 3.0)  # mass in (-t, t)
    return max(0.0, 1.0 - central)
