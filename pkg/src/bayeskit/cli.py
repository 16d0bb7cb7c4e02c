"""Command-line interface tying training, prediction, and the demos together.

Exit codes: 0 on success, 1 on usage errors (unknown flags, out-of-range
option values), 2 on data or model errors (unreadable files, schema
violations, undefined posteriors). Pass --json to any subcommand for
machine-readable output; identical inputs, flags, and seeds always produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import BayesKitError, InferenceError
from .estimation import SmoothingConfig
from .evaluation import decide, evaluate, posterior_of
from .exact_bayes import estimate_joint, bayes_error, param_count
from .independence import is_conditionally_independent, with_roles
from .naive_bayes import train
from .synthetic import mle_concentration_trial, sample, to_joint


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for data errors
        raise _UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _non_negative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _unit_open_float(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly in (0, 1), got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="dataset file")
    parser.add_argument(
        "--format", choices=("csv", "jsonl"), default="csv", help="dataset format"
    )
    parser.add_argument(
        "--label-column", default="label", help="name of the label column"
    )


def _load_training_data(args) -> "io.LabeledDataset":
    schema = labels = None
    if args.schema:
        schema, labels = io.load_schema_sidecar(args.schema)
    return io.load_dataset(
        args.data,
        format=args.format,
        label_column=args.label_column,
        schema=schema,
        label_space=labels,
    )


def _cmd_train(args) -> int:
    dataset = _load_training_data(args)
    model = train(dataset, SmoothingConfig(alpha=args.alpha, alpha_prior=args.alpha_prior))
    io.save_model(model, args.out)
    summary = {
        "out": args.out,
        "kind": "naive_bayes",
        "rows": len(dataset),
        "features": len(dataset.schema),
        "classes": len(dataset.label_space),
    }
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        print(
            f"wrote naive Bayes model to {args.out} "
            f"(rows={summary['rows']}, features={summary['features']}, "
            f"classes={summary['classes']})"
        )
    return 0


def _cmd_train_joint(args) -> int:
    dataset = _load_training_data(args)
    joint = estimate_joint(dataset)
    io.save_model(joint, args.out)
    summary = {
        "out": args.out,
        "kind": "joint_table",
        "rows": len(dataset),
        "cells": joint.n_cells,
        "classes": len(dataset.label_space),
    }
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        print(
            f"wrote joint table to {args.out} "
            f"(rows={summary['rows']}, cells={summary['cells']}, "
            f"classes={summary['classes']})"
        )
    return 0


def _cmd_predict(args) -> int:
    model = io.load_model(args.model)
    instances = io.load_instances(
        args.data, model.schema, format=args.format, label_column=args.label_column
    )
    labels = model.label_space.labels
    records = []
    for i, instance in enumerate(instances):
        try:
            post = posterior_of(model, instance)
        except InferenceError as exc:
            raise InferenceError(f"row {i}: {exc}") from exc
        k = max(range(len(post)), key=lambda j: (post[j], -j))
        records.append((i, labels[k], tuple(post)))
    if args.json:
        payload = [
            {
                "row": i,
                "label": label,
                "posterior": {name: p for name, p in zip(labels, post)},
            }
            for i, label, post in records
        ]
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        lines = ["row,label," + ",".join(f"p_{name}" for name in labels)]
        for i, label, post in records:
            lines.append(f"{i},{label}," + ",".join(repr(p) for p in post))
        _emit("\n".join(lines), args.out)
    return 0


def _cmd_evaluate(args) -> int:
    model = io.load_model(args.model)
    dataset = io.load_dataset(
        args.data,
        format=args.format,
        label_column=args.label_column,
        schema=model.schema,
        label_space=model.label_space,
    )
    loss = io.load_loss_matrix(args.loss) if args.loss else None
    report = evaluate(model, dataset, loss)
    labels = model.label_space.labels
    if args.json:
        payload = {
            "accuracy": report.accuracy,
            "misclassification_rate": report.misclassification_rate,
            "undecidable": report.undecidable,
            "empirical_risk": report.empirical_risk,
            "labels": list(labels),
            "confusion": [list(row) for row in report.confusion],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"accuracy={report.accuracy}")
        print(f"misclassification_rate={report.misclassification_rate}")
        print(f"undecidable={report.undecidable}")
        if report.empirical_risk is not None:
            print(f"empirical_risk={report.empirical_risk}")
        print("confusion (rows=true, columns=predicted):")
        width = max(len(name) for name in labels)
        header = " " * (width + 2) + " ".join(f"{name:>{width}}" for name in labels)
        print(header)
        for name, row in zip(labels, report.confusion):
            cells = " ".join(f"{c:>{width}}" for c in row)
            print(f"{name:>{width}}: {cells}")
    return 0


def _cmd_compare(args) -> int:
    naive_model = io.load_model(args.naive_model)
    joint_model = io.load_model(args.joint_model)
    if naive_model.schema != joint_model.schema:
        raise BayesKitError("the two models disagree on the feature schema")
    if naive_model.label_space != joint_model.label_space:
        raise BayesKitError("the two models disagree on the label space")
    dataset = io.load_dataset(
        args.data,
        format=args.format,
        label_column=args.label_column,
        schema=naive_model.schema,
        label_space=naive_model.label_space,
    )
    agree = both = 0
    correct = {"naive": 0, "joint": 0}
    decided = {"naive": 0, "joint": 0}
    for instance, label in dataset.rows:
        decisions = {}
        for name, model in (("naive", naive_model), ("joint", joint_model)):
            try:
                decisions[name] = decide(model, instance)
                decided[name] += 1
                correct[name] += decisions[name] == label
            except InferenceError:
                decisions[name] = None
        if decisions["naive"] is not None and decisions["joint"] is not None:
            both += 1
            agree += decisions["naive"] == decisions["joint"]
    payload = {
        "rows": len(dataset),
        "agreement": (agree / both) if both else 0.0,
        "naive_accuracy": (correct["naive"] / decided["naive"]) if decided["naive"] else 0.0,
        "joint_accuracy": (correct["joint"] / decided["joint"]) if decided["joint"] else 0.0,
        "naive_undecidable": len(dataset) - decided["naive"],
        "joint_undecidable": len(dataset) - decided["joint"],
    }
    if args.spec:
        spec = io.load_generator_spec(args.spec)
        payload["generating_bayes_error"] = bayes_error(to_joint(spec))
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for key, value in payload.items():
            print(f"{key}={value}")
    return 0


def _cmd_paramcount(args) -> int:
    full = param_count("full_joint", args.n)
    naive = param_count("naive", args.n)
    if args.json:
        print(json.dumps({"n": args.n, "full_joint": full, "naive": naive}, indent=2))
    else:
        print(f"full_joint={full} (2*(2^{args.n}-1))")
        print(f"naive={naive} (2*{args.n})")
    return 0


def _cmd_synth(args) -> int:
    spec = io.load_generator_spec(args.spec)
    dataset = sample(spec, args.count, args.seed)
    io.save_dataset(dataset, args.out, format=args.format)
    if args.json:
        print(json.dumps({"out": args.out, "rows": len(dataset), "seed": args.seed}, indent=2))
    else:
        print(f"wrote {len(dataset)} rows to {args.out} (seed={args.seed})")
    return 0


def _cmd_check_ci(args) -> int:
    joint = io.load_triple_joint(args.joint)
    x = args.x or joint.names[0]
    y = args.y or joint.names[1]
    z = args.z or joint.names[2]
    arranged = with_roles(joint, x, y, z)
    ok, witness = is_conditionally_independent(arranged, tol=args.tol)
    payload = {
        "x": x,
        "y": y,
        "z": z,
        "tol": args.tol,
        "conditionally_independent": ok,
    }
    if witness is not None:
        payload["witness"] = {
            "x_index": witness.x_index,
            "y_index": witness.y_index,
            "z_index": witness.z_index,
            "conditional": witness.conditional,
            "conditional_given_z": witness.conditional_given_z,
        }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"conditionally_independent={str(ok).lower()} (x={x}, y={y}, z={z}, tol={args.tol})")
        if witness is not None:
            print(
                f"witness: indices (x={witness.x_index}, y={witness.y_index}, "
                f"z={witness.z_index}) give P(x|y,z)={witness.conditional} vs "
                f"P(x|z)={witness.conditional_given_z}"
            )
    return 0


def _cmd_mle_trial(args) -> int:
    fraction = mle_concentration_trial(
        args.p, args.samples, args.trials, args.tolerance, args.seed
    )
    if args.json:
        payload = {
            "p": args.p,
            "samples": args.samples,
            "trials": args.trials,
            "tolerance": args.tolerance,
            "seed": args.seed,
            "fraction_within_tolerance": fraction,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"fraction_within_tolerance={fraction}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="bayeskit", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("train", help="fit a naive Bayes model from a dataset")
    _add_data_flags(p)
    p.add_argument("--alpha", type=_non_negative_float, default=1.0,
                   help="pseudocount for feature conditionals (default 1)")
    p.add_argument("--alpha-prior", type=_non_negative_float, default=0.0,
                   help="pseudocount for the class prior (default 0, plain MLE)")
    p.add_argument("--schema", help="sidecar schema JSON (authoritative when given)")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("train-joint", help="fit an explicit joint table (unsmoothed MLE)")
    _add_data_flags(p)
    p.add_argument("--schema", help="sidecar schema JSON (authoritative when given)")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_train_joint)

    p = sub.add_parser("predict", help="emit per-row label and posterior")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="accuracy, confusion matrix, optional risk")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--loss", help="loss matrix JSON for minimum-risk decisions")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("compare", help="per-row agreement of a naive model and a joint table")
    p.add_argument("--naive-model", required=True)
    p.add_argument("--joint-model", required=True)
    _add_data_flags(p)
    p.add_argument("--spec", help="generator spec JSON; adds the generating optimal error")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("paramcount", help="parameters needed: full joint vs factored")
    p.add_argument("--n", type=_positive_int, required=True, help="number of boolean features")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_paramcount)

    p = sub.add_parser("synth", help="sample a dataset from a generator spec")
    p.add_argument("--spec", required=True, help="generator spec JSON")
    p.add_argument("--count", type=_positive_int, required=True)
    p.add_argument("--seed", type=_non_negative_int, required=True)
    p.add_argument("--out", required=True, help="dataset file to write")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("check-ci", help="test conditional independence on a triple joint")
    p.add_argument("--joint", required=True, help="triple joint JSON")
    p.add_argument("--x", help="variable playing X (default: first axis)")
    p.add_argument("--y", help="variable playing Y (default: second axis)")
    p.add_argument("--z", help="conditioning variable Z (default: third axis)")
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check_ci)

    p = sub.add_parser("mle-trial", help="frequency-estimate concentration experiment")
    p.add_argument("--p", type=_unit_open_float, required=True)
    p.add_argument("--samples", type=_positive_int, required=True)
    p.add_argument("--trials", type=_positive_int, required=True)
    p.add_argument("--tolerance", type=_non_negative_float, required=True)
    p.add_argument("--seed", type=_non_negative_int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_mle_trial)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except BayesKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
