"""Command-line interface: train, predict, rules, eval.

Exit codes: 0 success, 2 bad data, 3 synthesis stalled with errors left (the
model is still written, with a diagnostic on stderr), 4 file or model-format
trouble.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from .collective import Collective, classify, evaluate
from .dataset import load_dataset, parse_cell, read_table
from .errors import DataError, DegenerateSplitError, ModelFormatError
from .model_io import load_model, save_model
from .rules import render_rules
from .synthesis import MODE_SPLIT, MODE_STATEMENT1, SynthesisConfig, synthesize

EXIT_OK = 0
EXIT_DATA = 2
EXIT_DIAGNOSTIC = 3
EXIT_IO = 4


def _fraction(text: str) -> Fraction:
    # exact rationals only: "0.8" and "4/5" both mean exactly 4/5
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal or fraction: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neurules",
        description="Grow a collective of two-input Boolean neurons from a "
        "small labeled table and classify by coherent majority vote.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="synthesize a classifier from a CSV table")
    train.add_argument("--data", required=True, help="training CSV (header row required)")
    train.add_argument("--label", required=True, help="name of the class column")
    train.add_argument(
        "--mode",
        choices=(MODE_STATEMENT1, MODE_SPLIT),
        default=MODE_STATEMENT1,
        help="admission regime: strict error descent, or split-based criteria",
    )
    train.add_argument("--delta", type=int, default=0, help="split-mode stop tolerance")
    train.add_argument(
        "--f-ratio",
        type=_fraction,
        default=Fraction(2, 5),
        help="survivor fraction per layer (default 2/5)",
    )
    train.add_argument("--max-p", type=int, default=None, help="largest product size tried")
    train.add_argument("--max-layers", type=int, default=10, help="hard layer cap")
    train.add_argument(
        "--chi0",
        type=_fraction,
        default=Fraction(4, 5),
        help="coherence threshold below which the vote refuses (default 4/5)",
    )
    train.add_argument("--seed", type=int, default=0, help="seed for the even split")
    train.add_argument("--out", required=True, help="where to write the model JSON")

    predict = sub.add_parser("predict", help="classify fresh rows with a saved model")
    predict.add_argument("--model", required=True)
    predict.add_argument("--data", required=True)

    rules = sub.add_parser("rules", help="print a model as IF-THEN rules")
    rules.add_argument("--model", required=True)

    evalp = sub.add_parser("eval", help="score a labeled CSV against a saved model")
    evalp.add_argument("--model", required=True)
    evalp.add_argument("--data", required=True)
    return parser


def _values_for_model(header, rows, c: Collective, path) -> np.ndarray:
    """Pick the model's variables out of a table; extra columns are ignored."""
    missing = [v for v in c.variable_names if v not in header]
    if missing:
        raise DataError(f"width mismatch: {path} lacks required column(s) {missing}")
    picks = [header.index(v) for v in c.variable_names]
    values = np.empty((len(rows), len(picks)), dtype=np.float64)
    for i, row in enumerate(rows):
        for k, j in enumerate(picks):
            values[i, k] = parse_cell(row[j], header[j], i)
    return values


def _cmd_train(args) -> int:
    ls = load_dataset(args.data, args.label)
    config = SynthesisConfig(
        mode=args.mode,
        delta=args.delta,
        f_ratio=args.f_ratio,
        max_layers=args.max_layers,
        max_p=args.max_p,
        chi0=args.chi0,
        seed=args.seed,
    )
    collective, report = synthesize(ls, config)
    echo = config.to_dict()
    echo["label_column"] = args.label
    save_model(args.out, collective, report=report.to_dict(), config=echo)
    print(f"model written to {args.out}")
    print(
        f"stop cause: {report.stop_cause}; kept layer {report.kept_layer}; "
        f"errors {report.final_errors}; collective size {report.collective_size}"
    )
    for line in report.pool_description:
        print(f"feature: {line}")
    if report.diagnostic is not None:
        print(f"warning: {report.diagnostic}", file=sys.stderr)
        print(
            f"doubtful instances (0-based data rows): {list(report.doubtful_instances)}",
            file=sys.stderr,
        )
        return EXIT_DIAGNOSTIC
    return EXIT_OK


def _cmd_predict(args) -> int:
    c = load_model(args.model).collective
    header, rows = read_table(args.data)
    values = _values_for_model(header, rows, c, args.data)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header + ["decision", "chi", "chi_decimal"])
    refused = 0
    for row, x in zip(rows, values):
        verdict = classify(c, x)
        refused += verdict.refused
        decision = verdict.decision if verdict.decision is not None else "REFUSED"
        writer.writerow(list(row) + [decision, str(verdict.chi), f"{float(verdict.chi):.6f}"])
    print(f"classified {len(rows)} row(s); {refused} refused", file=sys.stderr)
    return EXIT_OK


def _cmd_rules(args) -> int:
    print(render_rules(load_model(args.model).collective))
    return EXIT_OK


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    c = model.collective
    label_column = model.config.get("label_column")
    if not label_column:
        raise ModelFormatError("model does not record the training label column")
    header, rows = read_table(args.data)
    if label_column not in header:
        raise DataError(f"label column {label_column!r} missing from {args.data}")
    li = header.index(label_column)
    literals = [row[li] for row in rows]
    unknown = sorted(set(literals) - set(c.label_names))
    if unknown:
        raise DataError(
            f"unknown class literal(s) {unknown}; the model knows {list(c.label_names)}"
        )
    labels = [c.label_names.index(t) for t in literals]
    values = _values_for_model(header, rows, c, args.data)
    metrics = evaluate(c, values, labels)
    print(json.dumps(metrics.to_dict(), indent=2))
    if metrics.low_coherence_warning:
        print(
            f"warning: mean coherence {metrics.mean_chi} is below chi0 {c.chi0}; "
            "review the feature set or the learning set",
            file=sys.stderr,
        )
    return EXIT_OK


_HANDLERS = {
    "train": _cmd_train,
    "predict": _cmd_predict,
    "rules": _cmd_rules,
    "eval": _cmd_eval,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (DataError, DegenerateSplitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ModelFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
