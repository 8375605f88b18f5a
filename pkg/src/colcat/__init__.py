"""colcat: column-type inference with categorical-value identification.

Reads delimited text files, infers each column's type over {categorical,
date, float, integer, string}, identifies the possible values of categorical
columns while excluding missing and anomalous entries, and emits ARFF data
dictionaries. Ships training and evaluation harnesses plus the heuristic
baseline methods used for comparison.
"""

from .arff import emit_arff, parse_arff
from .categorical import (
    ColumnInference,
    FeatureVector,
    LogisticModel,
    extract_features,
    infer_column,
    predict_categorical_prob,
    redistribute,
)
from .config import ALL_TYPES, COLUMN_TYPES, MISSING_VOCABULARY, ROW_TYPES
from .errors import ColcatError
from .inference import clean_entries, column_type_posterior, row_type_posteriors
from .ingest import DataColumn, DataTable, read_table
from .machines import TypeMachine, builtin_machines
from .metrics import (
    jaccard_per_type,
    jaccard_sets,
    mcnemar,
    overall_accuracy,
    paired_t_test,
    pr_curve_micro,
)
from .training import AnnotatedCorpus, load_corpus, nested_cv, train_logistic
from .values import CategoricalValueReport, categorical_values, unique_baseline

__version__ = "0.1.0"

__all__ = [
    "ALL_TYPES",
    "COLUMN_TYPES",
    "MISSING_VOCABULARY",
    "ROW_TYPES",
    "AnnotatedCorpus",
    "CategoricalValueReport",
    "ColcatError",
    "ColumnInference",
    "DataColumn",
    "DataTable",
    "FeatureVector",
    "LogisticModel",
    "TypeMachine",
    "builtin_machines",
    "categorical_values",
    "clean_entries",
    "column_type_posterior",
    "emit_arff",
    "extract_features",
    "infer_column",
    "jaccard_per_type",
    "jaccard_sets",
    "load_corpus",
    "mcnemar",
    "nested_cv",
    "overall_accuracy",
    "paired_t_test",
    "parse_arff",
    "pr_curve_micro",
    "predict_categorical_prob",
    "read_table",
    "redistribute",
    "row_type_posteriors",
    "train_logistic",
    "unique_baseline",
]
