"""Deterministic synthetic corpus generation for training and evaluation.

Builds annotated datasets whose columns span the interesting cases: clearly
non-categorical integers (identifiers and wide-range counts), decimal and
exponent floats, ISO and textual dates, integer-coded categoricals with 2-13
levels, string-coded categoricals, and free text. A configurable share of
columns gets 5-10% of cells replaced by missing-value sentinels.

Annotations are derived from the cells actually emitted: a categorical
column's value list is the distinct non-sentinel levels present after
contamination.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .config import MISSING_VOCABULARY
from .ingest import DataColumn, DataTable, write_csv
from .training import AnnotatedColumn, AnnotatedCorpus, AnnotatedDataset

_WORDS = (
    "alder", "basil", "cedar", "dahlia", "elm", "fern", "ginkgo", "hazel",
    "iris", "juniper", "kale", "laurel", "maple", "nettle", "oak", "poplar",
    "quince", "rowan", "sage", "tulip", "umber", "violet", "willow", "yarrow",
    "zinnia", "aspen", "birch", "clover", "dill", "ebony",
)
_MONTHS = (
    "January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December",
)
# Sentinels used for contamination; drawn from the shared vocabulary but
# skipping bare whitespace so CSV round-trips stay easy to eyeball.
_SENTINELS = tuple(s for s in MISSING_VOCABULARY if s.strip())

COLUMN_KINDS = (
    "int_id", "int_count", "float_dec", "float_exp",
    "date_iso", "date_iso_time", "date_slash", "date_textual",
    "cat_int", "cat_str", "text_free",
)
# draw weights: categoricals and plain numerics dominate, as in real tables
_KIND_WEIGHTS = (10, 10, 12, 8, 6, 5, 5, 4, 18, 12, 10)


def _contaminate(rng: random.Random, cells: list[str]) -> list[str]:
    rate = rng.uniform(0.05, 0.10)
    n = max(1, round(rate * len(cells)))
    for i in rng.sample(range(len(cells)), n):
        cells[i] = rng.choice(_SENTINELS)
    return cells


def _random_date(rng: random.Random) -> tuple[int, int, int]:
    return rng.randint(1900, 2079), rng.randint(1, 12), rng.randint(1, 28)


def _make_cells(rng: random.Random, kind: str, n: int) -> tuple[list[str], str, bool]:
    """Cells, annotated type, and whether contamination is allowed."""
    if kind == "int_id":
        base = rng.randint(10**6, 10**11)
        ids = rng.sample(range(base, base + 50 * n), n)
        return [str(v) for v in ids], "integer", True
    if kind == "int_count":
        # wide range, high uniqueness; avoid the 1800-2100 year band
        return [str(rng.randint(2200, 99999)) for _ in range(n)], "integer", True
    if kind == "float_dec":
        return [f"{rng.uniform(-500, 500):.{rng.randint(1, 4)}f}" for _ in range(n)], "float", True
    if kind == "float_exp":
        return [f"{rng.uniform(0.1, 9.9):.3f}e{rng.randint(-6, 6)}" for _ in range(n)], "float", True
    if kind == "date_iso":
        return [
            "{:04d}-{:02d}-{:02d}".format(*_random_date(rng)) for _ in range(n)
        ], "date", True
    if kind == "date_iso_time":
        return [
            "{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}".format(
                *_random_date(rng),
                rng.randint(0, 23), rng.randint(0, 59), rng.randint(0, 59),
            )
            for _ in range(n)
        ], "date", True
    if kind == "date_slash":
        return [
            "{2:02d}/{1:02d}/{0:04d}".format(*_random_date(rng)) for _ in range(n)
        ], "date", True
    if kind == "date_textual":
        out = []
        for _ in range(n):
            y, m, d = _random_date(rng)
            out.append(f"{d} {_MONTHS[m - 1]} {y}")
        return out, "date", True
    if kind == "cat_int":
        # cap levels so the uniqueness ratio stays categorical-like on small n
        k = rng.randint(2, max(2, min(13, n // 5)))
        levels = [str(v) for v in rng.sample(range(0, 30), k)]
        return [rng.choice(levels) for _ in range(n)], "categorical", True
    if kind == "cat_str":
        k = rng.randint(2, max(2, min(10, n // 5)))
        levels = rng.sample(_WORDS, k)
        return [rng.choice(levels) for _ in range(n)], "categorical", True
    if kind == "text_free":
        out = []
        for i in range(n):
            words = rng.sample(_WORDS, rng.randint(3, 6))
            out.append(" ".join(words) + f" {i:03d}")
        return out, "string", True
    raise ValueError(f"unknown column kind {kind!r}")


def generate_corpus(
    n_datasets: int = 60,
    seed: int = 0,
    rows_range: tuple[int, int] = (12, 150),
    contaminated_share: float = 0.35,
) -> AnnotatedCorpus:
    """Build an in-memory annotated corpus of ``n_datasets`` CSV-shaped tables."""
    rng = random.Random(seed)
    datasets = []
    for d in range(n_datasets):
        n_rows = rng.randint(*rows_range)
        n_cols = rng.randint(5, 9)
        kinds = rng.choices(COLUMN_KINDS, weights=_KIND_WEIGHTS, k=n_cols)
        # keep every dataset useful for the value task
        if "cat_int" not in kinds and "cat_str" not in kinds:
            kinds[rng.randrange(n_cols)] = rng.choice(("cat_int", "cat_str"))
        columns = []
        annotations = []
        for i, kind in enumerate(kinds):
            cells, type_label, may_contaminate = _make_cells(rng, kind, n_rows)
            if may_contaminate and rng.random() < contaminated_share:
                cells = _contaminate(rng, cells)
            col = DataColumn.from_cells(f"{kind}_{i}", cells)
            values = None
            if type_label == "categorical":
                values = tuple(sorted(v for v in col.tallies if v not in _SENTINELS))
            columns.append(col)
            annotations.append((type_label, values))
        file = f"dataset_{d:03d}.csv"
        table = DataTable(f"dataset_{d:03d}", tuple(columns))
        annotated = tuple(
            AnnotatedColumn(col, file, i, type_label, values)
            for i, (col, (type_label, values)) in enumerate(zip(columns, annotations))
        )
        datasets.append(AnnotatedDataset(file, table, annotated))
    return AnnotatedCorpus(tuple(datasets))


def write_corpus(corpus: AnnotatedCorpus, out_dir) -> Path:
    """Write the corpus as CSV files plus an annotations JSON; returns the
    annotation file path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = {"datasets": []}
    for ds in corpus.datasets:
        write_csv(ds.table, out_dir / ds.file)
        entry = {"file": ds.file, "columns": []}
        for ac in ds.columns:
            ann: dict = {"name": ac.column.name, "type": ac.type_label}
            if ac.values is not None:
                ann["values"] = list(ac.values)
            entry["columns"].append(ann)
        doc["datasets"].append(entry)
    path = out_dir / "annotations.json"
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return path
