"""Command-line interface.

Subcommands: ``infer`` (per-column types and posteriors), ``values``
(categorical values of one column), ``arff`` (data-dictionary emission),
``train`` (nested cross-validation over an annotated corpus), and
``evaluate`` (the metric harness). Exit codes: 0 success, 1 usage error,
2 data or parse error, 3 model error. Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .arff import emit_arff, parse_arff
from .categorical import ColumnInference, infer_column, resolve_model
from .config import ALL_TYPES
from .errors import ColcatError, ModelError
from .evaluation import METHODS, evaluate_corpus
from .ingest import DataTable, read_table
from .training import (
    GRID_C,
    ClassifierTrainee,
    load_corpus,
    make_feature_cache,
    nested_cv,
    select_final_hyperparam,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _delimiter(text: str) -> str:
    value = {"\\t": "\t", "TAB": "\t", "tab": "\t"}.get(text, text)
    if len(value) != 1:
        raise _UsageError(f"delimiter must be a single character, got {text!r}")
    return value


def _build_parser() -> _Parser:
    parser = _Parser(prog="colcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_model=True):
        p.add_argument("--delimiter", default=",", help="field delimiter (default ,)")
        p.add_argument(
            "--threads",
            type=int,
            default=os.cpu_count() or 1,
            help="worker threads for per-column inference",
        )
        if with_model:
            p.add_argument("--model", default=None, help="classifier model JSON")

    p = sub.add_parser("infer", help="infer per-column types")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", dest="as_json")
    common(p)

    p = sub.add_parser("values", help="categorical values of one column")
    p.add_argument("file")
    p.add_argument("--column", required=True)
    common(p)

    p = sub.add_parser("arff", help="emit an ARFF data dictionary")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--relation", default=None)
    p.add_argument("--header-only", action="store_true")
    common(p)

    p = sub.add_parser("train", help="train the classifier with nested CV")
    p.add_argument("--corpus", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None, help="CV report path (default OUT.cv.json)")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("evaluate", help="score methods against annotations")
    p.add_argument("--corpus", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--model", default=None)
    p.add_argument("--report", required=True)
    p.add_argument("--nested", action="store_true", help="select hyperparameters per outer fold")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _infer_table(table: DataTable, model, threads: int) -> list[ColumnInference]:
    model = resolve_model(model)
    if threads <= 1 or len(table.columns) <= 1:
        return [infer_column(col, model) for col in table.columns]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda col: infer_column(col, model), table.columns))


def _cmd_infer(args) -> int:
    table = read_table(args.file, delimiter=_delimiter(args.delimiter))
    inferences = _infer_table(table, args.model, args.threads)
    if args.as_json:
        for inf in inferences:
            print(json.dumps(inf.to_record()))
    else:
        width = max((len(c.name) for c in table.columns), default=0)
        for inf in inferences:
            posts = "  ".join(f"{t[:3]}={inf.posterior5[t]:.3f}" for t in ALL_TYPES)
            print(f"{inf.name:<{width}}  {inf.predicted_type:<11}  {posts}")
    return 0


def _cmd_values(args) -> int:
    table = read_table(args.file, delimiter=_delimiter(args.delimiter))
    try:
        column = table.column(args.column)
    except KeyError:
        raise ColcatError(f"no column named {args.column!r}") from None
    inf = infer_column(column, resolve_model(args.model))
    if inf.base_type not in ("integer", "string"):
        raise ColcatError(
            f"column {args.column!r} is {inf.base_type}; it has no categorical values"
        )
    from .values import categorical_values

    report = inf.values or categorical_values(column, inf.base_type)
    print(f"column: {inf.name}")
    print(f"predicted type: {inf.predicted_type} (base {inf.base_type})")
    print("values:")
    for v in report.values:
        print(f"  {v.value!r}  count={v.count}  clean={v.clean_posterior:.4f}")
    if report.excluded:
        print("excluded:")
        for e in report.excluded:
            print(f"  {e.value!r}  count={e.count}  {e.label}")
    return 0


def _cmd_arff(args) -> int:
    table = read_table(args.file, delimiter=_delimiter(args.delimiter))
    inferences = _infer_table(table, args.model, args.threads)
    text = emit_arff(
        table, inferences, header_only=args.header_only, relation=args.relation
    )
    parse_arff(text)  # refuse to write text our own reader rejects
    Path(args.output).write_text(text, encoding="utf-8", newline="")
    return 0


def _cmd_train(args) -> int:
    corpus = load_corpus(args.corpus, args.annotations)
    cache = make_feature_cache()
    trainee = ClassifierTrainee(cache)
    report = nested_cv(corpus, GRID_C, args.folds, trainee, seed=args.seed)
    c_final = select_final_hyperparam(report)
    model = trainee.fit(corpus.columns(), c_final)
    model.save(args.out)
    report_path = args.report or f"{args.out}.cv.json"
    doc = report.to_dict()
    doc["final_C"] = c_final
    Path(report_path).write_text(json.dumps(doc, indent=2), encoding="utf-8")
    print(
        f"selected C={c_final:g}; average outer test error "
        f"{report.average_error:.4f}; model written to {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_evaluate(args) -> int:
    corpus = load_corpus(args.corpus, args.annotations)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    model = None
    if "ptype-cat" in methods and not args.nested:
        model = resolve_model(args.model)
    report = evaluate_corpus(
        corpus,
        methods=methods,
        model=model,
        nested=args.nested,
        folds=args.folds,
        seed=args.seed,
    )
    report.save(args.report)
    for name, te in report.type_evals.items():
        print(f"{name}: type accuracy {te.accuracy:.3f}", file=sys.stderr)
    for name, ve in report.value_evals.items():
        print(
            f"{name}: value accuracy {ve.accuracy:.3f}, "
            f"mean Jaccard {ve.mean_jaccard:.3f}",
            file=sys.stderr,
        )
    return 0


_COMMANDS = {
    "infer": _cmd_infer,
    "values": _cmd_values,
    "arff": _cmd_arff,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 3
    except (ColcatError, OSError, UnicodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
