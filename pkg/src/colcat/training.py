"""Classifier training, the annotated corpus, and nested cross-validation.

The logistic loss is sum_i log(1 + exp(-y_i (w.x_i + b))) + ||w||^2 / (2C)
over z-scored features, bias unpenalized. It is minimized by damped Newton
steps with Armijo backtracking: deterministic from the zero start, strictly
non-increasing loss, stopped when the gradient infinity-norm drops below
``tol``.

Nested cross-validation follows the usual two-level scheme: datasets (never
single columns) are partitioned into K seeded outer folds; for each outer
fold an inner K-fold grid search picks the hyperparameter with the lowest
average inner test error (ties to the smaller grid index), the method is
refitted on the whole outer training split, and the outer test error is
recorded.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol, Sequence

import numpy as np

from .categorical import FeatureVector, LogisticModel
from .errors import ConfigError, CorpusError, DegenerateLabelsError
from .ingest import DataColumn, DataTable, read_table

# Regularization grid: decade steps across the interval used for selection.
GRID_C: tuple[float, ...] = tuple(10.0**k for k in range(-4, 5))


# ---------------------------------------------------------------------------
# Logistic regression
# ---------------------------------------------------------------------------


def logistic_loss_grad(
    w: np.ndarray, b: float, x: np.ndarray, y: np.ndarray, c: float
) -> tuple[float, np.ndarray, float]:
    """Loss, gradient wrt w, gradient wrt b. ``y`` must be in {-1, +1}."""
    margin = y * (x @ w + b)
    loss = float(np.logaddexp(0.0, -margin).sum() + 0.5 * (w @ w) / c)
    s = 0.5 * (1.0 - np.tanh(0.5 * margin))  # sigmoid(-margin), stable
    coeff = y * s
    grad_w = -(x.T @ coeff) + w / c
    grad_b = float(-coeff.sum())
    return loss, grad_w, grad_b


def _minimize_logistic(
    x: np.ndarray,
    y: np.ndarray,
    c: float,
    tol: float = 1e-8,
    max_iter: int = 10000,
) -> tuple[np.ndarray, float, list[float]]:
    n, d = x.shape
    theta = np.zeros(d + 1)
    x1 = np.hstack([x, np.ones((n, 1))])
    reg = np.full(d + 1, 1.0 / c)
    reg[-1] = 0.0

    def loss_grad(th):
        l, gw, gb = logistic_loss_grad(th[:d], th[d], x, y, c)
        return l, np.append(gw, gb)

    loss, grad = loss_grad(theta)
    history = [loss]
    for _ in range(max_iter):
        if np.max(np.abs(grad)) < tol:
            break
        margin = y * (x1 @ theta)
        s = 0.5 * (1.0 - np.tanh(0.5 * margin))
        r = s * (1.0 - s)
        hess = (x1 * r[:, None]).T @ x1 + np.diag(reg)
        try:
            step = np.linalg.solve(hess + 1e-12 * np.eye(d + 1), -grad)
        except np.linalg.LinAlgError:
            step = -grad
        if grad @ step >= 0:  # not a descent direction; fall back
            step = -grad
        t = 1.0
        slope = grad @ step
        while t > 1e-14:
            cand = theta + t * step
            cand_loss, cand_grad = loss_grad(cand)
            if cand_loss <= loss + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            break  # cannot decrease further at float resolution
        theta, loss, grad = cand, cand_loss, cand_grad
        history.append(loss)
    return theta[:d], float(theta[d]), history


def standardize_stats(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-feature mean and std; (near-)constant features get std 1 so their
    z-scores stay finite and carry no signal."""
    means = x.mean(axis=0)
    stds = x.std(axis=0)
    stds[stds < 1e-12] = 1.0
    return means, stds


def train_logistic(
    features: Sequence[FeatureVector],
    labels: Sequence[int],
    c: float,
    tol: float = 1e-8,
    max_iter: int = 10000,
) -> LogisticModel:
    """Fit the categorical classifier; labels are 1 = categorical, 0 = not."""
    if c <= 0:
        raise ValueError("regularization strength must be positive")
    labels = list(labels)
    if len(set(labels)) < 2:
        raise DegenerateLabelsError("training labels contain a single class")
    raw = np.stack([f.as_array() for f in features])
    y = np.where(np.asarray(labels) > 0, 1.0, -1.0)
    means, stds = standardize_stats(raw)
    z = (raw - means) / stds
    w, b, history = _minimize_logistic(z, y, c, tol=tol, max_iter=max_iter)
    return LogisticModel(
        weights=w,
        bias=b,
        feature_means=means,
        feature_stds=stds,
        c=c,
        loss_history=history,
    )


# ---------------------------------------------------------------------------
# Annotated corpus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnotatedColumn:
    column: DataColumn
    dataset: str  # source file name; fold splits group by this
    index: int    # position within the dataset, for stable ordering
    type_label: str
    values: tuple[str, ...] | None  # annotated categorical values

    @property
    def key(self) -> tuple[str, int]:
        return (self.dataset, self.index)


@dataclass(frozen=True)
class AnnotatedDataset:
    file: str
    table: DataTable
    columns: tuple[AnnotatedColumn, ...]


@dataclass(frozen=True)
class AnnotatedCorpus:
    datasets: tuple[AnnotatedDataset, ...]

    def columns(self) -> list[AnnotatedColumn]:
        return [c for ds in self.datasets for c in ds.columns]

    @property
    def n_columns(self) -> int:
        return sum(len(ds.columns) for ds in self.datasets)


def load_corpus(corpus_dir, annotations_path, delimiter: str = ",") -> AnnotatedCorpus:
    """Read CSV files and their hand annotations into one corpus object."""
    corpus_dir = Path(corpus_dir)
    try:
        doc = json.loads(Path(annotations_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"cannot read annotations: {exc}") from exc
    datasets = []
    for entry in doc.get("datasets", []):
        file = entry["file"]
        table = read_table(corpus_dir / file, delimiter=delimiter)
        by_name = {col.name: (i, col) for i, col in enumerate(table.columns)}
        annotated = []
        for ann in entry["columns"]:
            name = ann["name"]
            if name not in by_name:
                raise CorpusError(f"{file}: annotated column {name!r} not in table")
            type_label = ann["type"]
            values = ann.get("values")
            if type_label == "categorical" and not values:
                raise CorpusError(
                    f"{file}:{name}: categorical annotation without values"
                )
            idx, col = by_name[name]
            annotated.append(
                AnnotatedColumn(
                    col, file, idx, type_label, tuple(values) if values else None
                )
            )
        datasets.append(AnnotatedDataset(file, table, tuple(annotated)))
    if not datasets:
        raise CorpusError("annotation file lists no datasets")
    return AnnotatedCorpus(tuple(datasets))


# ---------------------------------------------------------------------------
# Nested cross-validation
# ---------------------------------------------------------------------------


class Trainee(Protocol):
    """A method whose hyperparameter is selected by nested CV."""

    def fit(self, train: Sequence[AnnotatedColumn], hyperparam): ...

    def error(self, model, test: Sequence[AnnotatedColumn]) -> float: ...


def split_folds(names: Sequence[str], k: int, seed: int) -> dict[str, int]:
    """Seeded dataset-level fold assignment: shuffle, then deal round-robin."""
    if len(names) < k:
        raise ConfigError(f"{len(names)} datasets cannot fill {k} folds")
    order = sorted(names)
    random.Random(seed).shuffle(order)
    return {name: i % k for i, name in enumerate(order)}


def _inner_seed(seed: int, outer: int) -> int:
    return seed * 7919 + outer + 1


@dataclass(frozen=True)
class FoldResult:
    fold: int
    hyperparam: object
    test_error: float
    model: object = field(compare=False)


@dataclass(frozen=True)
class CVReport:
    folds: tuple[FoldResult, ...]
    average_error: float
    fold_of_dataset: dict[str, int]
    seed: int
    grid: tuple

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "grid": list(self.grid),
            "average_test_error": self.average_error,
            "folds": [
                {
                    "fold": fr.fold,
                    "selected": fr.hyperparam,
                    "test_error": fr.test_error,
                }
                for fr in self.folds
            ],
            "fold_of_dataset": dict(sorted(self.fold_of_dataset.items())),
        }


def grid_search(
    trainee: Trainee,
    grid: Sequence,
    columns_by_dataset: dict[str, list[AnnotatedColumn]],
    k: int,
    seed: int,
):
    """Plain K-fold selection: lowest mean test error, ties to lower index.

    With fewer than two datasets no split exists, so the first grid point is
    returned (consistent with the tie-break convention).
    """
    k = min(k, len(columns_by_dataset))
    if k < 2:
        return grid[0], [math.nan] * len(grid)
    assignment = split_folds(list(columns_by_dataset), k, seed)
    mean_errors = []
    for p in grid:
        errors = []
        for fold in range(k):
            train = [
                c
                for name, cols in columns_by_dataset.items()
                if assignment[name] != fold
                for c in cols
            ]
            test = [
                c
                for name, cols in columns_by_dataset.items()
                if assignment[name] == fold
                for c in cols
            ]
            if not train or not test:
                continue
            model = trainee.fit(train, p)
            err = trainee.error(model, test)
            if not math.isnan(err):
                errors.append(err)
        mean_errors.append(sum(errors) / len(errors) if errors else math.inf)
    best = min(range(len(grid)), key=lambda i: (mean_errors[i], i))
    return grid[best], mean_errors


def nested_cv(
    corpus: AnnotatedCorpus,
    grid: Sequence,
    k: int,
    trainee: Trainee,
    seed: int = 0,
) -> CVReport:
    """Algorithm: outer folds estimate error, inner folds pick the grid point."""
    if k < 2:
        raise ConfigError("need at least two folds")
    by_dataset = {ds.file: list(ds.columns) for ds in corpus.datasets}
    assignment = split_folds(list(by_dataset), k, seed)
    _assert_dataset_integrity(by_dataset, assignment)

    results = []
    for fold in range(k):
        train_sets = {n: cols for n, cols in by_dataset.items() if assignment[n] != fold}
        test = [c for n, cols in by_dataset.items() if assignment[n] == fold for c in cols]
        p_star, _ = grid_search(trainee, grid, train_sets, k, _inner_seed(seed, fold))
        train = [c for cols in train_sets.values() for c in cols]
        model = trainee.fit(train, p_star)
        err = trainee.error(model, test) if test else math.nan
        results.append(FoldResult(fold, p_star, err, model))
    valid = [r.test_error for r in results if not math.isnan(r.test_error)]
    return CVReport(
        folds=tuple(results),
        average_error=sum(valid) / len(valid) if valid else math.nan,
        fold_of_dataset=assignment,
        seed=seed,
        grid=tuple(grid),
    )


def _assert_dataset_integrity(
    by_dataset: dict[str, list[AnnotatedColumn]], assignment: dict[str, int]
) -> None:
    # Columns from one source file must never straddle folds.
    for name, cols in by_dataset.items():
        folds = {assignment[c.dataset] for c in cols}
        if folds and folds != {assignment[name]}:
            raise ConfigError(f"dataset {name} contributes columns to folds {folds}")


def select_final_hyperparam(report: CVReport):
    """Majority vote over the outer folds' selections, ties to grid order."""
    counts: dict = {}
    for fr in report.folds:
        counts[fr.hyperparam] = counts.get(fr.hyperparam, 0) + 1
    return max(report.grid, key=lambda p: (counts.get(p, 0), -report.grid.index(p)))


# ---------------------------------------------------------------------------
# The classifier as a trainee
# ---------------------------------------------------------------------------

CLASSIFIER_LABELS = ("integer", "string", "categorical")


@dataclass
class FeatureCache:
    """Per-column features and four-type posteriors, computed once.

    The four-type posterior and the clean-entry features do not depend on the
    classifier, so grid search over C only redoes the cheap logistic part.
    """

    compute: Callable[[AnnotatedColumn], tuple[dict[str, float], FeatureVector]]
    _store: dict[tuple[str, int], tuple[dict[str, float], FeatureVector]] = field(
        default_factory=dict
    )

    def get(self, col: AnnotatedColumn):
        if col.key not in self._store:
            self._store[col.key] = self.compute(col)
        return self._store[col.key]


def make_feature_cache(machines=None, type_prior=None, row_weights=None) -> FeatureCache:
    from .categorical import extract_features
    from .inference import argmax_type, clean_entries, column_type_posterior

    def compute(col: AnnotatedColumn):
        posterior4 = column_type_posterior(col.column, machines, type_prior, row_weights)
        base = argmax_type(posterior4)
        info = clean_entries(col.column, base, machines, row_weights)
        return posterior4, extract_features(col.column, posterior4, info)

    return FeatureCache(compute)


@dataclass
class ClassifierTrainee:
    """Trains the logistic model; error is the five-type 0/1 column error."""

    cache: FeatureCache

    def fit(self, train: Sequence[AnnotatedColumn], hyperparam: float) -> LogisticModel:
        rows = [c for c in train if c.type_label in CLASSIFIER_LABELS]
        feats = [self.cache.get(c)[1] for c in rows]
        labels = [int(c.type_label == "categorical") for c in rows]
        return train_logistic(feats, labels, hyperparam)

    def predict(self, model: LogisticModel, col: AnnotatedColumn) -> str:
        from .categorical import classify_posterior
        from .config import ALL_TYPES
        from .inference import argmax_type

        posterior4, features = self.cache.get(col)
        posterior5, _ = classify_posterior(posterior4, features, model)
        return argmax_type(posterior5, order=ALL_TYPES)

    def error(self, model: LogisticModel, test: Sequence[AnnotatedColumn]) -> float:
        if not test:
            return math.nan
        wrong = sum(self.predict(model, c) != c.type_label for c in test)
        return wrong / len(test)
