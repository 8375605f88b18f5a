"""Evaluation metrics and the two significance tests.

PR curves are micro-averaged: all (score, label) pairs are pooled before the
threshold sweep, tied scores collapsing to a single operating point. The
McNemar statistic defaults to the continuity-corrected form; the uncorrected
textbook form is available by flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from scipy.special import betainc

MCNEMAR_SIGNIFICANCE = 3.84  # chi-square, 1 dof, alpha = 0.05


def overall_accuracy(pred: Sequence[str], truth: Sequence[str]) -> float:
    if len(pred) != len(truth) or not truth:
        raise ValueError("prediction and truth lists must be equal and non-empty")
    return sum(p == t for p, t in zip(pred, truth)) / len(truth)


def jaccard_per_type(pred: Sequence[str], truth: Sequence[str], type_name: str) -> float:
    """One-vs-rest Jaccard TP/(TP+FP+FN); 1 when the type never occurs."""
    if len(pred) != len(truth):
        raise ValueError("prediction and truth lists must be equal length")
    tp = fp = fn = 0
    for p, t in zip(pred, truth):
        if p == type_name and t == type_name:
            tp += 1
        elif p == type_name:
            fp += 1
        elif t == type_name:
            fn += 1
    denom = tp + fp + fn
    return tp / denom if denom else 1.0


def jaccard_sets(a: Iterable[str], b: Iterable[str]) -> float:
    """|A intersect B| / |A union B|; 1 when both are empty."""
    a, b = set(a), set(b)
    union = a | b
    return len(a & b) / len(union) if union else 1.0


@dataclass(frozen=True)
class PRCurve:
    # one (threshold, precision, recall) triple per distinct score
    points: tuple[tuple[float, float, float], ...]
    average_precision: float


def pr_curve(pairs: Iterable[tuple[float, int]]) -> PRCurve:
    """PR sweep over pooled (score, binary label) pairs.

    AP is the step-sum sum_k (R_k - R_{k-1}) * P_k over the ranked sweep.
    A pool with no positive labels yields an empty curve and AP 0.
    """
    pairs = sorted(pairs, key=lambda sl: -sl[0])
    n_pos = sum(label for _, label in pairs)
    if n_pos == 0:
        return PRCurve((), 0.0)
    points = []
    ap = 0.0
    tp = fp = 0
    prev_recall = 0.0
    i = 0
    while i < len(pairs):
        threshold = pairs[i][0]
        while i < len(pairs) and pairs[i][0] == threshold:
            tp += pairs[i][1]
            fp += 1 - pairs[i][1]
            i += 1
        precision = tp / (tp + fp)
        recall = tp / n_pos
        points.append((threshold, precision, recall))
        ap += (recall - prev_recall) * precision
        prev_recall = recall
    return PRCurve(tuple(points), ap)


def pr_curve_micro(
    records: Iterable[tuple[str, str, float, bool]]
) -> PRCurve:
    """Micro-averaged curve over (column, type, score, truth-flag) records."""
    return pr_curve((score, int(flag)) for _, _, score, flag in records)


@dataclass(frozen=True)
class McNemarResult:
    statistic: float
    significant: bool
    corrected: bool
    n01: int
    n10: int


def mcnemar(n01: int, n10: int, corrected: bool = True) -> McNemarResult:
    """McNemar statistic over the two one-sided disagreement counts."""
    if n01 + n10 == 0:
        raise ValueError("statistic undefined: no disagreements")
    diff = abs(n01 - n10)
    if corrected:
        diff = max(diff - 1, 0)
    stat = diff * diff / (n01 + n10)
    return McNemarResult(stat, stat > MCNEMAR_SIGNIFICANCE, corrected, n01, n10)


@dataclass(frozen=True)
class TTestResult:
    statistic: float
    p_value: float
    dof: int


def paired_t_test(xs: Sequence[float], ys: Sequence[float]) -> TTestResult:
    """Two-sided paired t-test via the regularized incomplete beta function."""
    if len(xs) != len(ys):
        raise ValueError("paired samples must have equal length")
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two pairs")
    d = [x - y for x, y in zip(xs, ys)]
    mean = sum(d) / n
    var = sum((v - mean) ** 2 for v in d) / (n - 1)
    if var == 0.0:
        raise ValueError("differences are constant; t statistic undefined")
    t = mean / math.sqrt(var / n)
    dof = n - 1
    p = float(betainc(dof / 2.0, 0.5, dof / (dof + t * t)))
    return TTestResult(t, p, dof)
