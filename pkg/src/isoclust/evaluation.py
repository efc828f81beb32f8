"""Clustering accuracy metrics and the timing benchmark harness."""

from __future__ import annotations

import statistics
import sys
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dataset import class_count, generate_random
from .pipeline import run_pipeline

BENCH_CSV_HEADER = (
    "dataset,n,d,k,engine,workers,affinity_ms,mst_ms,partition_ms,"
    "total_ms,miso,misclassification"
)


@dataclass
class BenchRecord:
    """One benchmark measurement: a dataset/engine pair and its timings."""

    dataset: str
    n: int
    d: int
    k: int
    engine: str
    workers: int
    affinity_ms: float
    mst_ms: float
    partition_ms: float
    total_ms: float
    miso: float
    misclassification: Optional[float] = None


def misclassification_rate(pred, truth) -> float:
    """Fraction of points not explained by the best cluster-to-class matching.

    Builds the contingency matrix of predicted clusters 1..k against truth
    classes, finds the maximum-agreement one-to-one assignment of clusters
    to classes, and returns 1 - matched/n. Residual points (label 0) never
    match anything, so they always count as errors. Invariant under
    relabeling of either side.
    """
    p = np.asarray(pred, dtype=np.int64)
    t = np.asarray(truth, dtype=np.int64)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(
            f"pred and truth must be 1-d arrays of equal length, got "
            f"{p.shape} and {t.shape}"
        )
    if (p < 0).any():
        raise ValueError("predicted labels must be >= 0")
    n = p.shape[0]
    if n == 0:
        raise ValueError("empty label arrays")
    classes = class_count(t)
    k = int(p.max())
    if k == 0:
        return 1.0
    contingency = np.zeros((k, classes), dtype=np.int64)
    clustered = p >= 1
    np.add.at(contingency, (p[clustered] - 1, t[clustered]), 1)
    rows, cols = linear_sum_assignment(-contingency)
    matched = int(contingency[rows, cols].sum())
    return 1.0 - matched / n


def benchmark(
    sizes: Sequence[int],
    dims: Sequence[int],
    ks: Sequence[int],
    engines: Sequence[str],
    seeds: Sequence[int],
    *,
    repetitions: int = 3,
    sigma: Union[str, float] = "auto",
    alpha: float = 0.0,
    workers: Optional[int] = None,
    spread: float = 1.0,
    root: int = 0,
) -> list[BenchRecord]:
    """Run the full pipeline over a grid of generated datasets.

    For every (n, d, k, engine, seed) combination: generate points, run one
    discarded warm-up, then `repetitions` timed runs, and record the median
    of each phase timing together with the miso value and the
    misclassification rate against the generator's blob assignment.
    Runs execute one at a time so timings are not co-scheduled.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    if not sizes:
        raise ValueError("sizes must be nonempty")
    records: list[BenchRecord] = []
    for n in sizes:
        for d in dims:
            for k in ks:
                for seed in seeds:
                    name = f"rand-n{n}-d{d}-k{k}-s{seed}"
                    try:
                        points, truth = generate_random(n, d, k, seed, spread)
                    except ValueError as exc:
                        print(
                            f"benchmark: skipping {name}: {exc}",
                            file=sys.stderr,
                        )
                        continue
                    for engine in engines:
                        try:
                            record = _bench_one(
                                name, points, truth, k, engine, repetitions,
                                sigma=sigma, alpha=alpha, workers=workers,
                                root=root,
                            )
                        except ValueError as exc:
                            print(
                                f"benchmark: skipping {name} ({engine}): {exc}",
                                file=sys.stderr,
                            )
                            continue
                        records.append(record)
    return records


def _bench_one(
    name, points, truth, k, engine, repetitions, *, sigma, alpha, workers, root
) -> BenchRecord:
    run_pipeline(points, k, sigma, alpha, root, engine, workers)  # warm-up
    runs = [
        run_pipeline(points, k, sigma, alpha, root, engine, workers)
        for _ in range(repetitions)
    ]
    last = runs[-1]
    phase = {
        key: statistics.median(r.timings_ms[key] for r in runs)
        for key in ("affinity", "mst", "partition", "total")
    }
    return BenchRecord(
        dataset=name,
        n=last.n,
        d=last.d,
        k=k,
        engine=engine,
        workers=last.workers,
        affinity_ms=phase["affinity"],
        mst_ms=phase["mst"],
        partition_ms=phase["partition"],
        total_ms=phase["total"],
        miso=last.result.miso,
        misclassification=misclassification_rate(last.result.labels, truth),
    )


def write_bench_csv(records: Iterable[BenchRecord], path: str) -> None:
    """Write benchmark records under the fixed CSV header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(BENCH_CSV_HEADER + "\n")
        for r in records:
            mis = "" if r.misclassification is None else repr(r.misclassification)
            fh.write(
                f"{r.dataset},{r.n},{r.d},{r.k},{r.engine},{r.workers},"
                f"{r.affinity_ms:.3f},{r.mst_ms:.3f},{r.partition_ms:.3f},"
                f"{r.total_ms:.3f},{r.miso!r},{mis}\n"
            )
