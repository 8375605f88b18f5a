"""The evaluation harness: run methods over an annotated corpus, score them.

Two protocols are supported. The fixed protocol evaluates every method on
every annotated column with a supplied classifier model and default baseline
thresholds. The nested protocol follows the cross-validation scheme end to
end: datasets are split into K seeded outer folds, each method's
hyperparameters are selected by an inner K-fold grid search on the outer
training split, and per-column outputs are pooled ("micro-averaged") across
the outer test folds before any metric is computed.

Type metrics cover all annotated columns; value metrics cover the columns
annotated categorical, where a method that predicts a non-categorical type
contributes an empty value set.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .baselines import (
    BotParams,
    OpenMLParams,
    bot_infer,
    bot_values,
    openml_infer,
    openml_values,
    posterior_numeric_disambiguator,
    weka_infer,
    weka_values,
)
from .categorical import LogisticModel, classify_posterior
from .config import ALL_TYPES
from .errors import ConfigError
from .inference import argmax_type, clean_entries, row_type_posteriors
from .metrics import (
    PRCurve,
    McNemarResult,
    TTestResult,
    jaccard_per_type,
    jaccard_sets,
    mcnemar,
    overall_accuracy,
    paired_t_test,
    pr_curve_micro,
)
from .training import (
    GRID_C,
    AnnotatedColumn,
    AnnotatedCorpus,
    ClassifierTrainee,
    FeatureCache,
    _inner_seed,
    grid_search,
    make_feature_cache,
    split_folds,
)
from .values import build_value_report, unique_baseline

METHODS = ("ptype-cat", "bot", "openml", "weka", "unique")

GRID_BOT_TYPES: tuple[tuple[int, int], ...] = tuple(
    itertools.product(range(10, 121, 10), range(25, 126, 10))
)
GRID_BOT_VALUE_MIN: tuple[int, ...] = (5,) + tuple(range(10, 81, 10))
GRID_OPENML: tuple[int, ...] = tuple(range(10, 121, 10))


@dataclass
class MethodOutput:
    """Pooled per-column outputs of one method."""

    name: str
    types: dict[tuple[str, int], str] = field(default_factory=dict)
    scores: dict[tuple[str, int], dict[str, float]] = field(default_factory=dict)
    value_sets: dict[tuple[str, int], frozenset[str]] = field(default_factory=dict)
    selected: list = field(default_factory=list)  # per-fold hyperparameters
    predicted_fold: dict[tuple[str, int], int] = field(default_factory=dict)


def _hard_scores(predicted: str) -> dict[str, float]:
    return {t: 1.0 if t == predicted else 0.0 for t in ALL_TYPES}


# ---------------------------------------------------------------------------
# Per-method runners: predict a batch of columns given fitted parameters
# ---------------------------------------------------------------------------


def _run_ptype_cat(
    cols: Sequence[AnnotatedColumn],
    model: LogisticModel,
    cache: FeatureCache,
    out: MethodOutput,
    machines=None,
    row_weights=None,
) -> None:
    for c in cols:
        posterior4, feats = cache.get(c)
        posterior5, _ = classify_posterior(posterior4, feats, model)
        predicted = argmax_type(posterior5, order=ALL_TYPES)
        out.types[c.key] = predicted
        out.scores[c.key] = dict(posterior5)
        if predicted == "categorical":
            base = argmax_type(posterior4)
            rows = row_type_posteriors(c.column, base, machines, row_weights)
            info = clean_entries(c.column, base, machines, row_weights)
            out.value_sets[c.key] = build_value_report(c.column, rows, info).value_set
        else:
            out.value_sets[c.key] = frozenset()


def _run_bot(cols, params: BotParams, out: MethodOutput) -> None:
    for c in cols:
        predicted = bot_infer(c.column, params)
        out.types[c.key] = predicted
        out.scores[c.key] = _hard_scores(predicted)
        out.value_sets[c.key] = (
            bot_values(c.column, params) if predicted == "categorical" else frozenset()
        )


def _run_openml(cols, params: OpenMLParams, disambiguate, out: MethodOutput) -> None:
    for c in cols:
        predicted = openml_infer(c.column, params, disambiguate)
        out.types[c.key] = predicted
        out.scores[c.key] = _hard_scores(predicted)
        out.value_sets[c.key] = (
            openml_values(c.column) if predicted == "categorical" else frozenset()
        )


def _run_weka(cols, disambiguate, out: MethodOutput) -> None:
    for c in cols:
        predicted = weka_infer(c.column, disambiguate)
        out.types[c.key] = predicted
        out.scores[c.key] = _hard_scores(predicted)
        out.value_sets[c.key] = weka_values(c.column, disambiguate)


def _run_unique(cols, out: MethodOutput) -> None:
    for c in cols:
        out.value_sets[c.key] = unique_baseline(c.column).value_set


# ---------------------------------------------------------------------------
# Baseline trainees for the nested protocol
# ---------------------------------------------------------------------------


def _type_error(predict, test) -> float:
    if not test:
        return math.nan
    return sum(predict(c) != c.type_label for c in test) / len(test)


@dataclass
class BotTypeTrainee:
    def fit(self, train, p):
        return BotParams(t_int=p[0], t_str=p[1])

    def error(self, params, test) -> float:
        return _type_error(lambda c: bot_infer(c.column, params), test)


@dataclass
class BotValueTrainee:
    """Selects the value threshold with the type thresholds already fixed."""

    type_params: BotParams

    def fit(self, train, p):
        return BotParams(self.type_params.t_int, self.type_params.t_str, p)

    def error(self, params, test) -> float:
        cats = [c for c in test if c.type_label == "categorical"]
        if not cats:
            return math.nan
        scores = []
        for c in cats:
            predicted = (
                bot_values(c.column, params)
                if bot_infer(c.column, params) == "categorical"
                else frozenset()
            )
            scores.append(jaccard_sets(predicted, c.values or ()))
        return 1.0 - sum(scores) / len(scores)


@dataclass
class OpenMLTrainee:
    disambiguate: object

    def fit(self, train, p):
        return OpenMLParams(t_unique=p)

    def error(self, params, test) -> float:
        return _type_error(
            lambda c: openml_infer(c.column, params, self.disambiguate), test
        )


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeEval:
    accuracy: float
    jaccard: dict[str, float]
    confusion: dict[str, dict[str, int]]  # truth -> predicted -> count
    pr_micro: PRCurve
    pr_per_type: dict[str, PRCurve]


@dataclass(frozen=True)
class ValueEval:
    accuracy: float
    mean_jaccard: float
    per_column: dict[tuple[str, int], float]


@dataclass(frozen=True)
class EvaluationReport:
    methods: dict[str, MethodOutput]
    type_evals: dict[str, TypeEval]
    value_evals: dict[str, ValueEval]
    mcnemar_vs_ptype_cat: dict[str, McNemarResult]
    t_test_vs_ptype_cat: dict[str, TTestResult | None]
    fold_of_dataset: dict[str, int] | None
    config: dict

    def to_dict(self) -> dict:
        def curve(c: PRCurve) -> dict:
            return {
                "average_precision": c.average_precision,
                "points": [list(p) for p in c.points],
            }

        doc: dict = {"config": self.config, "methods": {}}
        if self.fold_of_dataset is not None:
            doc["fold_of_dataset"] = dict(sorted(self.fold_of_dataset.items()))
        for name in self.methods:
            entry: dict = {"selected_hyperparams": self.methods[name].selected}
            if name in self.type_evals:
                te = self.type_evals[name]
                entry["type"] = {
                    "overall_accuracy": te.accuracy,
                    "jaccard": te.jaccard,
                    "confusion": te.confusion,
                    "pr_micro": curve(te.pr_micro),
                    "pr_per_type": {t: curve(c) for t, c in te.pr_per_type.items()},
                }
            if name in self.value_evals:
                ve = self.value_evals[name]
                entry["values"] = {
                    "overall_accuracy": ve.accuracy,
                    "average_jaccard": ve.mean_jaccard,
                }
            stats = {}
            if name in self.mcnemar_vs_ptype_cat:
                m = self.mcnemar_vs_ptype_cat[name]
                stats["mcnemar"] = {
                    "statistic": m.statistic,
                    "significant": m.significant,
                    "n01": m.n01,
                    "n10": m.n10,
                }
            if name in self.t_test_vs_ptype_cat:
                t = self.t_test_vs_ptype_cat[name]
                stats["paired_t"] = (
                    None
                    if t is None
                    else {"statistic": t.statistic, "p_value": t.p_value, "dof": t.dof}
                )
            if stats:
                entry["vs_ptype_cat"] = stats
            doc["methods"][name] = entry
        return doc

    def save(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2), encoding="utf-8"
        )


def _score_types(cols: Sequence[AnnotatedColumn], out: MethodOutput) -> TypeEval:
    keys = [c.key for c in cols]
    truth = [c.type_label for c in cols]
    pred = [out.types[k] for k in keys]
    confusion = {t: {p: 0 for p in ALL_TYPES} for t in ALL_TYPES}
    for t, p in zip(truth, pred):
        confusion[t][p] += 1
    records = [
        (f"{c.dataset}:{c.index}", t, out.scores[c.key][t], c.type_label == t)
        for c in cols
        for t in ALL_TYPES
    ]
    per_type = {
        t: pr_curve_micro(r for r in records if r[1] == t) for t in ALL_TYPES
    }
    return TypeEval(
        accuracy=overall_accuracy(pred, truth),
        jaccard={t: jaccard_per_type(pred, truth, t) for t in ALL_TYPES},
        confusion=confusion,
        pr_micro=pr_curve_micro(records),
        pr_per_type=per_type,
    )


def _score_values(cols: Sequence[AnnotatedColumn], out: MethodOutput) -> ValueEval:
    cats = [c for c in cols if c.type_label == "categorical"]
    per_column = {}
    exact = 0
    for c in cats:
        predicted = out.value_sets[c.key]
        annotated = set(c.values or ())
        per_column[c.key] = jaccard_sets(predicted, annotated)
        exact += predicted == frozenset(annotated)
    n = len(cats)
    return ValueEval(
        accuracy=exact / n if n else math.nan,
        mean_jaccard=sum(per_column.values()) / n if n else math.nan,
        per_column=per_column,
    )


def evaluate_corpus(
    corpus: AnnotatedCorpus,
    methods: Sequence[str] = METHODS,
    model: LogisticModel | None = None,
    nested: bool = False,
    folds: int = 5,
    seed: int = 0,
    machines=None,
    type_prior=None,
    row_weights=None,
) -> EvaluationReport:
    """Score the requested methods on an annotated corpus."""
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}")
    if not nested and "ptype-cat" in methods and model is None:
        raise ConfigError("fixed-model evaluation needs a classifier model")

    cache = make_feature_cache(machines, type_prior, row_weights)
    disambiguate = posterior_numeric_disambiguator(machines, type_prior, row_weights)
    cols = corpus.columns()
    outputs = {name: MethodOutput(name) for name in methods}
    fold_of_dataset = None

    if not nested:
        if "ptype-cat" in methods:
            _run_ptype_cat(cols, model, cache, outputs["ptype-cat"], machines, row_weights)
        if "bot" in methods:
            _run_bot(cols, BotParams(), outputs["bot"])
        if "openml" in methods:
            _run_openml(cols, OpenMLParams(), disambiguate, outputs["openml"])
        if "weka" in methods:
            _run_weka(cols, disambiguate, outputs["weka"])
        if "unique" in methods:
            _run_unique(cols, outputs["unique"])
    else:
        by_dataset = {ds.file: list(ds.columns) for ds in corpus.datasets}
        fold_of_dataset = split_folds(list(by_dataset), folds, seed)
        for fold in range(folds):
            train_sets = {
                n: cs for n, cs in by_dataset.items() if fold_of_dataset[n] != fold
            }
            train = [c for cs in train_sets.values() for c in cs]
            test = [
                c for n, cs in by_dataset.items() if fold_of_dataset[n] == fold for c in cs
            ]
            inner = _inner_seed(seed, fold)
            if "ptype-cat" in methods:
                trainee = ClassifierTrainee(cache)
                c_star, _ = grid_search(trainee, GRID_C, train_sets, folds, inner)
                fitted = trainee.fit(train, c_star)
                outputs["ptype-cat"].selected.append(c_star)
                _run_ptype_cat(
                    test, fitted, cache, outputs["ptype-cat"], machines, row_weights
                )
            if "bot" in methods:
                pair, _ = grid_search(
                    BotTypeTrainee(), GRID_BOT_TYPES, train_sets, folds, inner
                )
                type_params = BotParams(t_int=pair[0], t_str=pair[1])
                vmin, _ = grid_search(
                    BotValueTrainee(type_params), GRID_BOT_VALUE_MIN, train_sets,
                    folds, inner,
                )
                params = BotParams(pair[0], pair[1], vmin)
                outputs["bot"].selected.append((pair[0], pair[1], vmin))
                _run_bot(test, params, outputs["bot"])
            if "openml" in methods:
                t_star, _ = grid_search(
                    OpenMLTrainee(disambiguate), GRID_OPENML, train_sets, folds, inner
                )
                outputs["openml"].selected.append(t_star)
                _run_openml(test, OpenMLParams(t_star), disambiguate, outputs["openml"])
            if "weka" in methods:
                _run_weka(test, disambiguate, outputs["weka"])
            if "unique" in methods:
                _run_unique(test, outputs["unique"])
            for name in methods:
                for c in test:
                    outputs[name].predicted_fold[c.key] = fold

    type_evals = {
        name: _score_types(cols, out)
        for name, out in outputs.items()
        if name != "unique"
    }
    value_evals = {name: _score_values(cols, out) for name, out in outputs.items()}

    mcnemar_results: dict[str, McNemarResult] = {}
    t_results: dict[str, TTestResult | None] = {}
    if "ptype-cat" in methods:
        ours = outputs["ptype-cat"]
        ordered = sorted(cols, key=lambda c: c.key)
        cats = [c for c in ordered if c.type_label == "categorical"]
        for name in methods:
            if name == "ptype-cat":
                continue
            theirs = outputs[name]
            if name != "unique":
                n01 = n10 = 0
                for c in ordered:
                    ours_ok = ours.types[c.key] == c.type_label
                    theirs_ok = theirs.types[c.key] == c.type_label
                    n01 += theirs_ok is False and ours_ok
                    n10 += ours_ok is False and theirs_ok
                if n01 + n10 > 0:
                    mcnemar_results[name] = mcnemar(n01, n10)
            if cats:
                xs = [value_evals[name].per_column[c.key] for c in cats]
                ys = [value_evals["ptype-cat"].per_column[c.key] for c in cats]
                try:
                    t_results[name] = paired_t_test(xs, ys)
                except ValueError:
                    t_results[name] = None

    return EvaluationReport(
        methods=outputs,
        type_evals=type_evals,
        value_evals=value_evals,
        mcnemar_vs_ptype_cat=mcnemar_results,
        t_test_vs_ptype_cat=t_results,
        fold_of_dataset=fold_of_dataset,
        config={
            "methods": list(methods),
            "nested": nested,
            "folds": folds if nested else None,
            "seed": seed if nested else None,
            "columns": len(cols),
        },
    )
