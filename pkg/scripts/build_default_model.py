"""Regenerate the bundled classifier model.

Trains on a synthetic reference corpus: nested cross-validation selects the
regularization strength, then the classifier is refitted on the full corpus
and written to src/colcat/data/default_model.json.

Usage: python3 scripts/build_default_model.py
"""

import json
from pathlib import Path

from colcat.synthetic import generate_corpus
from colcat.training import (
    GRID_C,
    ClassifierTrainee,
    make_feature_cache,
    nested_cv,
    select_final_hyperparam,
)

REFERENCE_SEED = 7
OUT = Path(__file__).resolve().parents[1] / "src" / "colcat" / "data" / "default_model.json"


def main() -> None:
    corpus = generate_corpus(n_datasets=60, seed=REFERENCE_SEED)
    trainee = ClassifierTrainee(make_feature_cache())
    report = nested_cv(corpus, GRID_C, k=5, trainee=trainee, seed=REFERENCE_SEED)
    c_final = select_final_hyperparam(report)
    model = trainee.fit(corpus.columns(), c_final)
    OUT.write_text(model.to_json() + "\n", encoding="utf-8")
    print(json.dumps({"C": c_final, "average_test_error": report.average_error}))
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
