"""isoclust: exact tree-isoperimetric clustering of vector data.

Builds a complete Euclidean affinity graph over a point set, extracts its
minimum spanning tree, and solves the k-subpartition isoperimetry problem
on that tree exactly, once with a plain sequential sweep and once with a
deterministic level-synchronous engine that must match it bit for bit.
"""

from .affinity import (
    Extrema,
    NodeWeights,
    auto_sigma,
    distance_matrix,
    extrema,
    flow,
    node_weights,
    potentials,
    vertex_weights,
)
from .dataset import (
    DataFormatError,
    generate_random,
    load_labels,
    load_points,
    save_labels,
    save_points,
    standardize,
)
from .evaluation import (
    BENCH_CSV_HEADER,
    BenchRecord,
    benchmark,
    misclassification_rate,
    write_bench_csv,
)
from .isoperim import (
    DecisionOutcome,
    InfeasibleSubpartitionError,
    MisoResult,
    brute_force_miso,
    decide,
    extract_labels,
    miso_results_equal,
    outcomes_equal,
    solve_miso,
    subpartition_cost,
)
from .mst import (
    NO_VERTEX,
    RootedTree,
    prim_mst,
    reverse_bfs_order,
    total_distance,
    tree_from_parent_list,
)
from .parengine import (
    WORKERS_ENV_VAR,
    DepthSchedule,
    WorkerPool,
    exclusive_scan,
    min_reduce,
    par_decide,
    par_solve_miso,
    resolve_workers,
    sum_reduce,
)
from .pipeline import PipelineRun, run_pipeline, summarize

__version__ = "0.1.0"

__all__ = [
    "BENCH_CSV_HEADER",
    "BenchRecord",
    "DataFormatError",
    "DecisionOutcome",
    "DepthSchedule",
    "Extrema",
    "InfeasibleSubpartitionError",
    "MisoResult",
    "NO_VERTEX",
    "NodeWeights",
    "PipelineRun",
    "RootedTree",
    "WORKERS_ENV_VAR",
    "WorkerPool",
    "auto_sigma",
    "benchmark",
    "brute_force_miso",
    "decide",
    "distance_matrix",
    "exclusive_scan",
    "extract_labels",
    "extrema",
    "flow",
    "generate_random",
    "load_labels",
    "load_points",
    "min_reduce",
    "misclassification_rate",
    "miso_results_equal",
    "node_weights",
    "outcomes_equal",
    "par_decide",
    "par_solve_miso",
    "potentials",
    "prim_mst",
    "resolve_workers",
    "reverse_bfs_order",
    "run_pipeline",
    "save_labels",
    "save_points",
    "solve_miso",
    "standardize",
    "subpartition_cost",
    "sum_reduce",
    "summarize",
    "total_distance",
    "tree_from_parent_list",
    "vertex_weights",
    "write_bench_csv",
    "__version__",
]
