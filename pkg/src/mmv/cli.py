"""Command-line interface.

Three subcommands:

  simulate   generate a simulation-model dataset as CSV
  fit        optional marginal screening + direction extraction, JSON out
  cv         repeated cross-validation error table (csv or json)

Floats are written with 17 significant digits so simulate -> load round-trips
are exact. All errors derived from MmvError exit with status 1 and a
one-line message; --seed fully determines every output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .data import Dataset, validate_dataset
from .errors import MissingLabelColumn, MmvError, ParseError
from .evaluate import CvPlan, parse_method, run_experiment
from .mvindex import MvConfig, screen_by_mv
from .optimizer import OptimizerConfig, fit_mmv
from .rng import RngStream
from .simulate import MODELS, ModelSpec, generate

FLOAT_FORMAT = ".17g"


def load_csv(path: str, label_column: str = "y") -> Dataset:
    """Read a headed CSV into a validated Dataset.

    Every non-label column is parsed as a float feature in header order;
    labels are kept as strings and densified by first appearance.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if label_column not in header:
            raise MissingLabelColumn(
                f"{path}: no column named {label_column!r} in header {header}"
            )
        label_pos = header.index(label_column)
        feature_names = [name for i, name in enumerate(header) if i != label_pos]
        rows: list[list[float]] = []
        labels: list[str] = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: row {line_no} has {len(row)} cells, expected {len(header)}"
                )
            values = []
            for i, cell in enumerate(row):
                if i == label_pos:
                    labels.append(cell)
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: row {line_no}, column {header[i]!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
            rows.append(values)
    data = validate_dataset(np.asarray(rows, dtype=np.float64), labels)
    print(
        f"loaded {data.n} rows, {data.p} features, {data.n_classes} classes from {path}",
        file=sys.stderr,
    )
    return data


def write_csv(data: Dataset, path: str | None, label_column: str = "y") -> None:
    handle = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(handle)
        writer.writerow([f"x{j + 1}" for j in range(data.p)] + [label_column])
        for i in range(data.n):
            row = [format(v, FLOAT_FORMAT) for v in data.features[i]]
            row.append(str(data.class_labels[data.labels[i]]))
            writer.writerow(row)
    finally:
        if path:
            handle.close()


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _mv_config(args) -> MvConfig:
    return MvConfig(mode=args.cdf, kernel_family=args.kernel, bandwidth=args.bandwidth)


def _dataset_from_args(args) -> Dataset:
    if args.input:
        return load_csv(args.input, args.label)
    if not args.model:
        raise MmvError("provide --input CSV or --model with --n and --p")
    return generate(ModelSpec(args.model, args.n, args.p, args.seed))


def _cmd_simulate(args) -> int:
    spec = ModelSpec(args.model, args.n, args.p, args.seed)
    write_csv(generate(spec), args.out, args.label)
    return 0


def _cmd_fit(args) -> int:
    data = _dataset_from_args(args)
    working = data
    kept = None
    if args.keep is not None:
        kept = screen_by_mv(data, args.keep)
        working = Dataset(
            np.ascontiguousarray(data.features[:, kept]), data.labels, data.class_labels
        )
    opt = OptimizerConfig(d=args.d, restarts=args.restarts, max_iters=args.max_iters)
    result = fit_mmv(working, _mv_config(args), opt, RngStream(args.seed).child("fit"))
    directions = result.basis.directions
    if kept is not None and directions.shape[0]:
        embedded = np.zeros((directions.shape[0], data.p))
        embedded[:, kept] = directions
        directions = embedded
    elif kept is not None:
        directions = np.empty((0, data.p))
    payload = {
        "effective_d": result.effective_d,
        "directions": directions.tolist(),
        "mv_values": result.basis.mv_values.tolist(),
        "screened_indices": None if kept is None else [int(j) for j in kept],
        "config": {
            "d": args.d,
            "keep": args.keep,
            "cdf": args.cdf,
            "kernel": args.kernel,
            "bandwidth": args.bandwidth,
            "restarts": args.restarts,
            "max_iters": args.max_iters,
            "seed": args.seed,
            "input": args.input or f"model {args.model}",
        },
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_cv(args) -> int:
    data_or_spec: ModelSpec | Dataset
    if args.input:
        data_or_spec = load_csv(args.input, args.label)
    elif args.model:
        data_or_spec = ModelSpec(args.model, args.n, args.p, args.seed)
    else:
        raise MmvError("provide --input CSV or --model with --n and --p")
    opt = OptimizerConfig(d=args.d, restarts=args.restarts, max_iters=args.max_iters)
    methods = [
        parse_method(
            name,
            mv_config=_mv_config(args),
            optimizer=opt,
            knn_k=args.knn_k,
            screen_keep=args.keep,
        )
        for name in args.methods.split(",")
    ]
    plan = CvPlan(folds=args.folds, stratified=True, seed=args.seed)
    reports = run_experiment(data_or_spec, methods, plan, args.reps, args.seed)
    if args.reps == 1:
        print("note: single repetition; sd reported as 0", file=sys.stderr)
    if args.format == "json":
        payload = {
            "repetitions": args.reps,
            "single_repetition": args.reps == 1,
            "results": [
                {
                    "method": r.method,
                    "mean_error_pct": round(100.0 * r.mean, 2),
                    "sd_pct": round(100.0 * r.sd, 2),
                    "errors": list(r.errors),
                }
                for r in reports
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["method,mean_error_pct,sd_pct,repetitions"]
        lines += [
            f"{r.method},{100.0 * r.mean:.2f},{100.0 * r.sd:.2f},{r.repetitions}"
            for r in reports
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _add_common(parser: argparse.ArgumentParser, model_required=False) -> None:
    parser.add_argument(
        "--model", choices=MODELS, required=model_required, help="simulation model"
    )
    parser.add_argument("--n", type=int, default=80, help="sample size")
    parser.add_argument("--p", type=int, default=20, help="feature dimension")
    parser.add_argument("--seed", type=int, default=0, help="root random seed")
    parser.add_argument("--label", default="y", help="label column name")
    parser.add_argument("--out", default=None, help="output path (default stdout)")


def _add_fit_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", default=None, help="input CSV path")
    parser.add_argument("--d", type=int, default=1, help="directions to extract")
    parser.add_argument("--keep", type=int, default=None, help="screen to this many columns")
    parser.add_argument("--cdf", choices=("step", "smoothed"), default="smoothed")
    parser.add_argument("--kernel", choices=("gaussian", "epanechnikov"), default="gaussian")
    parser.add_argument("--bandwidth", type=float, default=None, help="fixed bandwidth")
    parser.add_argument("--restarts", type=int, default=10, help="optimizer restarts")
    parser.add_argument("--max-iters", type=int, default=200, help="ascent iteration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmv",
        description="Dimension reduction for classification by maximizing the "
        "mean-variance dependence index.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a model dataset as CSV")
    _add_common(p_sim, model_required=True)

    p_fit = sub.add_parser("fit", help="screen (optional) and extract directions")
    _add_common(p_fit)
    _add_fit_options(p_fit)

    p_cv = sub.add_parser("cv", help="repeated cross-validation error table")
    _add_common(p_cv)
    _add_fit_options(p_cv)
    p_cv.add_argument("--methods", default="mmv+lda,lda", help="comma-separated method names")
    p_cv.add_argument("--folds", type=int, default=10)
    p_cv.add_argument("--reps", type=int, default=50, help="experiment repetitions")
    p_cv.add_argument("--knn-k", type=int, default=1)
    p_cv.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"simulate": _cmd_simulate, "fit": _cmd_fit, "cv": _cmd_cv}
    try:
        return handlers[args.command](args)
    except (MmvError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
