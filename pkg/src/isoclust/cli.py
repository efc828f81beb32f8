"""Command-line interface: `isoclust cluster` and `isoclust bench`.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 engine mismatch
in `--engine both` mode.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Union

from .dataset import (
    DataFormatError,
    generate_random,
    load_points,
    save_labels,
    standardize,
)
from .evaluation import benchmark, misclassification_rate, write_bench_csv
from .isoperim import InfeasibleSubpartitionError, miso_results_equal
from .pipeline import run_pipeline, summarize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_ENGINE_MISMATCH = 3


@dataclass
class RunConfig:
    """Everything one `cluster` invocation needs."""

    input: Optional[str]
    generate: Optional[str]
    k: int
    sigma: Union[str, float]
    alpha: float
    root: int
    engine: str
    workers: Optional[int]
    seed: int
    labels_out: str
    summary_out: str
    standardize: bool
    header: bool
    label_column: Optional[int]
    format: str


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _sigma_arg(text: str) -> Union[str, float]:
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'auto' or a positive number, got {text!r}"
        ) from None
    if not (value > 0):
        raise argparse.ArgumentTypeError(f"sigma must be > 0, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of integers")
    return [int(s) for s in items]


def _engine_list(text: str) -> list[str]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items or any(e not in ("seq", "par") for e in items):
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated subset of seq,par, got {text!r}"
        )
    return items


def parse_generate_spec(spec: str, default_seed: int) -> tuple[int, int, int, int, float]:
    """Parse "n=100,d=5,k=3[,seed=1][,spread=1.0]" into generator arguments."""
    fields = {}
    for item in spec.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ValueError(f"generator spec item {item!r} is not key=value")
        key, _, value = item.partition("=")
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"n", "d", "k", "seed", "spread"}
    if unknown:
        raise ValueError(f"unknown generator spec keys: {sorted(unknown)}")
    missing = {"n", "d", "k"} - set(fields)
    if missing:
        raise ValueError(f"generator spec needs keys: {sorted(missing)}")
    return (
        int(fields["n"]),
        int(fields["d"]),
        int(fields["k"]),
        int(fields.get("seed", default_seed)),
        float(fields.get("spread", 1.0)),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoclust",
        description="Exact tree-isoperimetric clustering of vector data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cluster = sub.add_parser("cluster", help="cluster one dataset")
    source = cluster.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="delimited text file of points")
    source.add_argument(
        "--generate",
        help="synthetic data spec, e.g. n=100,d=5,k=3,seed=1[,spread=1.0]",
    )
    cluster.add_argument("--k", type=_positive_int, required=True,
                         help="number of clusters (>= 1)")
    cluster.add_argument("--sigma", type=_sigma_arg, default="auto",
                         help="similarity scale, or 'auto' for the mean distance")
    cluster.add_argument("--alpha", type=_nonnegative_float, default=0.0,
                         help="isolation-potential factor (default 0)")
    cluster.add_argument("--root", type=int, default=0, help="tree root vertex")
    cluster.add_argument("--engine", choices=("seq", "par", "both"), default="seq")
    cluster.add_argument("--workers", type=_positive_int, default=None,
                         help="worker count for the parallel engine")
    cluster.add_argument("--seed", type=int, default=1,
                         help="seed when --generate omits one")
    cluster.add_argument("--labels-out", default="labels.txt")
    cluster.add_argument("--summary-out", default="summary.json")
    cluster.add_argument("--standardize", action="store_true",
                         help="z-score each input column first")
    cluster.add_argument("--header", action="store_true",
                         help="input file has a header row")
    cluster.add_argument("--label-column", type=int, default=None,
                         help="0-based truth-label column in the input file")
    cluster.add_argument("--format", choices=("csv", "whitespace"), default="csv")

    bench = sub.add_parser("bench", help="run the timing benchmark grid")
    bench.add_argument("--sizes", type=_int_list, required=True,
                       help="comma-separated dataset sizes")
    bench.add_argument("--dim", type=_int_list, default=[5],
                       help="comma-separated dimensions (default 5)")
    bench.add_argument("--k", type=_int_list, default=[3],
                       help="comma-separated cluster counts (default 3)")
    bench.add_argument("--engines", type=_engine_list, default=["seq", "par"])
    bench.add_argument("--seeds", type=_int_list, default=[1])
    bench.add_argument("--sigma", type=_sigma_arg, default="auto")
    bench.add_argument("--alpha", type=_nonnegative_float, default=0.0)
    bench.add_argument("--workers", type=_positive_int, default=None)
    bench.add_argument("--repetitions", type=_positive_int, default=3)
    bench.add_argument("--spread", type=float, default=1.0)
    bench.add_argument("--csv-out", default="bench.csv")
    return parser


def _load_config_data(config: RunConfig):
    if config.input is not None:
        points, truth = load_points(
            config.input,
            format=config.format,
            label_column=config.label_column,
            header=config.header,
        )
        source = config.input
    else:
        n, d, k_blobs, seed, spread = parse_generate_spec(config.generate, config.seed)
        points, truth = generate_random(n, d, k_blobs, seed, spread)
        source = f"generated({config.generate})"
    if config.standardize:
        points = standardize(points)
    return points, truth, source


def cmd_cluster(config: RunConfig) -> int:
    """Cluster one dataset and write the labels file and JSON summary."""
    points, truth, source = _load_config_data(config)

    if config.engine == "both":
        seq_run = run_pipeline(points, config.k, config.sigma, config.alpha,
                               config.root, "seq", config.workers)
        par_run = run_pipeline(points, config.k, config.sigma, config.alpha,
                               config.root, "par", config.workers)
        if not miso_results_equal(seq_run.result, par_run.result):
            print(
                "engine mismatch: sequential and parallel solvers disagree "
                f"(seq miso={seq_run.result.miso!r}, "
                f"par miso={par_run.result.miso!r})",
                file=sys.stderr,
            )
            return EXIT_ENGINE_MISMATCH
        run, engines_match = seq_run, True
    else:
        run = run_pipeline(points, config.k, config.sigma, config.alpha,
                           config.root, config.engine, config.workers)
        engines_match = None

    summary = summarize(run)
    summary["source"] = source
    if config.engine == "both":
        summary["engine"] = "both"
        summary["engines_match"] = engines_match
    if truth is not None:
        summary["misclassification"] = misclassification_rate(
            run.result.labels, truth
        )

    save_labels(config.labels_out, run.result.labels)
    with open(config.summary_out, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """Run the benchmark grid and write its CSV."""
    records = benchmark(
        sizes=args.sizes,
        dims=args.dim,
        ks=args.k,
        engines=args.engines,
        seeds=args.seeds,
        repetitions=args.repetitions,
        sigma=args.sigma,
        alpha=args.alpha,
        workers=args.workers,
        spread=args.spread,
    )
    write_bench_csv(records, args.csv_out)
    print(f"wrote {len(records)} records to {args.csv_out}")
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "cluster":
            config = RunConfig(
                input=args.input,
                generate=args.generate,
                k=args.k,
                sigma=args.sigma,
                alpha=args.alpha,
                root=args.root,
                engine=args.engine,
                workers=args.workers,
                seed=args.seed,
                labels_out=args.labels_out,
                summary_out=args.summary_out,
                standardize=args.standardize,
                header=args.header,
                label_column=args.label_column,
                format=args.format,
            )
            return cmd_cluster(config)
        return cmd_bench(args)
    except (
        DataFormatError,
        InfeasibleSubpartitionError,
        ValueError,
        OSError,
        MemoryError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
