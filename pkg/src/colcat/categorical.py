"""Detecting the categorical type: features, binary classifier, mass split.

A column first gets a four-type posterior. If its leading type is integer or
string, an eight-feature logistic classifier estimates the probability q that
the column is categorical, and q splits the leading type's posterior mass
between that type and categorical. Columns led by date or float keep
categorical probability zero.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .config import ALL_TYPES, COLUMN_TYPES
from .errors import ModelError
from .inference import (
    CleanInfo,
    RowPosterior,
    argmax_type,
    clean_entries,
    column_type_posterior,
    row_type_posteriors,
)
from .ingest import DataColumn
from .values import CategoricalValueReport, build_value_report

FEATURE_NAMES = ("p_date", "p_float", "p_integer", "p_string", "U", "R", "U_c", "R_c")


@dataclass(frozen=True)
class FeatureVector:
    """The classifier's eight inputs for one column."""

    p_date: float
    p_float: float
    p_integer: float
    p_string: float
    u: int        # unique values
    r: float      # U / N
    u_clean: int  # unique clean values
    r_clean: float  # U_c / N_c, 0 when the column has no clean cells

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.p_date,
                self.p_float,
                self.p_integer,
                self.p_string,
                float(self.u),
                self.r,
                float(self.u_clean),
                self.r_clean,
            ]
        )


def extract_features(
    column: DataColumn, posterior: dict[str, float], clean_info: CleanInfo
) -> FeatureVector:
    """Build the feature vector; ``clean_info`` must match the leading type."""
    n = column.size
    return FeatureVector(
        p_date=posterior["date"],
        p_float=posterior["float"],
        p_integer=posterior["integer"],
        p_string=posterior["string"],
        u=column.n_unique,
        r=column.n_unique / n,
        u_clean=clean_info.u_clean,
        r_clean=(clean_info.u_clean / clean_info.n_clean) if clean_info.n_clean else 0.0,
    )


@dataclass
class LogisticModel:
    """Binary categorical/not-categorical classifier with frozen scaling.

    Features are z-scored with the training-set statistics stored here, so
    inference is reproducible regardless of what data it later sees.
    """

    weights: np.ndarray
    bias: float
    feature_means: np.ndarray
    feature_stds: np.ndarray
    c: float
    loss_history: list[float] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.feature_means = np.asarray(self.feature_means, dtype=float)
        self.feature_stds = np.asarray(self.feature_stds, dtype=float)
        k = len(FEATURE_NAMES)
        if (
            self.weights.shape != (k,)
            or self.feature_means.shape != (k,)
            or self.feature_stds.shape != (k,)
        ):
            raise ModelError("model arrays must have length 8")
        if not np.all(self.feature_stds > 0):
            raise ModelError("feature stds must all be positive")
        if not self.c > 0:
            raise ModelError("regularization strength must be positive")

    def predict_matrix(self, raw: np.ndarray) -> np.ndarray:
        z = (raw - self.feature_means) / self.feature_stds
        margin = z @ self.weights + self.bias
        q = 0.5 * (1.0 + np.tanh(0.5 * margin))  # stable sigmoid
        eps = np.finfo(float).eps
        return np.clip(q, eps, 1.0 - eps)

    def to_json(self) -> str:
        return json.dumps(
            {
                "weights": self.weights.tolist(),
                "bias": self.bias,
                "feature_means": self.feature_means.tolist(),
                "feature_stds": self.feature_stds.tolist(),
                "C": self.c,
                "feature_names": list(FEATURE_NAMES),
            },
            indent=2,
        )

    def save(self, path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def from_json(cls, text: str) -> "LogisticModel":
        try:
            doc = json.loads(text)
            names = tuple(doc["feature_names"])
            if names != FEATURE_NAMES:
                raise ModelError(f"unexpected feature order {names!r}")
            return cls(
                weights=np.array(doc["weights"], dtype=float),
                bias=float(doc["bias"]),
                feature_means=np.array(doc["feature_means"], dtype=float),
                feature_stds=np.array(doc["feature_stds"], dtype=float),
                c=float(doc["C"]),
            )
        except ModelError:
            raise
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ModelError(f"malformed model file: {exc}") from exc

    @classmethod
    def load(cls, path) -> "LogisticModel":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ModelError(f"cannot read model {path}: {exc}") from exc
        return cls.from_json(text)


def predict_categorical_prob(model: LogisticModel, f: FeatureVector) -> float:
    """q = sigmoid(w . standardize(f) + b), clamped inside (0, 1)."""
    return float(model.predict_matrix(f.as_array()[None, :])[0])


def redistribute(posterior4: dict[str, float], q: float) -> dict[str, float]:
    """Split the leading type's mass with q to form the five-type posterior.

    Leading date or float: categorical stays exactly zero. Leading integer or
    string: its mass p becomes q*p categorical and (1-q)*p for itself; the
    other three masses are copied bit-for-bit.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q={q!r} outside [0, 1]")
    leader = argmax_type(posterior4)
    out = {t: posterior4[t] for t in COLUMN_TYPES}
    if leader in ("date", "float"):
        out["categorical"] = 0.0
    else:
        out["categorical"] = q * posterior4[leader]
        out[leader] = (1.0 - q) * posterior4[leader]
    return {t: out[t] for t in ALL_TYPES}


@dataclass(frozen=True)
class ColumnInference:
    """Everything inferred about one column."""

    name: str
    posterior4: dict[str, float]
    posterior5: dict[str, float]
    predicted_type: str
    base_type: str  # leading four-type; the encoding type when categorical
    categorical_prob: float
    row_posteriors: list[RowPosterior]
    clean_info: CleanInfo
    values: CategoricalValueReport | None  # set when predicted categorical

    def to_record(self) -> dict:
        rec = {
            "column": self.name,
            "posterior": {t: self.posterior5[t] for t in ALL_TYPES},
            "predicted": self.predicted_type,
        }
        if self.predicted_type == "categorical":
            rec["base_type"] = self.base_type
            rec["values"] = [v.value for v in self.values.values]
        return rec


_BUNDLED_MODEL: LogisticModel | None = None


def bundled_model() -> LogisticModel:
    """The model shipped with the package (trained on the synthetic corpus)."""
    global _BUNDLED_MODEL
    if _BUNDLED_MODEL is None:
        text = (
            resources.files("colcat").joinpath("data/default_model.json").read_text()
        )
        _BUNDLED_MODEL = LogisticModel.from_json(text)
    return _BUNDLED_MODEL


def resolve_model(path=None) -> LogisticModel:
    """Model lookup: explicit path, then $COLCAT_MODEL, then the bundled one."""
    if path is not None:
        return LogisticModel.load(path)
    env = os.environ.get("COLCAT_MODEL")
    if env:
        return LogisticModel.load(env)
    return bundled_model()


def classify_posterior(
    posterior4: dict[str, float], features: FeatureVector, model: LogisticModel
) -> tuple[dict[str, float], float]:
    """Five-type posterior and the classifier output for cached pipelines."""
    base = argmax_type(posterior4)
    q = predict_categorical_prob(model, features) if base in ("integer", "string") else 0.0
    return redistribute(posterior4, q), q


def infer_column(
    column: DataColumn,
    model: LogisticModel | None = None,
    machines=None,
    type_prior=None,
    row_weights=None,
) -> ColumnInference:
    """Run the full pipeline on one column."""
    model = model or bundled_model()
    posterior4 = column_type_posterior(column, machines, type_prior, row_weights)
    base = argmax_type(posterior4)
    rows = row_type_posteriors(column, base, machines, row_weights)
    info = clean_entries(column, base, machines, row_weights)
    features = extract_features(column, posterior4, info)
    posterior5, q = classify_posterior(posterior4, features, model)
    predicted = argmax_type(posterior5, order=ALL_TYPES)
    values = None
    if predicted == "categorical":
        values = build_value_report(column, rows, info)
    return ColumnInference(
        name=column.name,
        posterior4=posterior4,
        posterior5=posterior5,
        predicted_type=predicted,
        base_type=base,
        categorical_prob=q,
        row_posteriors=rows,
        clean_info=info,
        values=values,
    )
