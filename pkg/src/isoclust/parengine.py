"""Deterministic data-parallel engine.

Mirrors a depth-synchronous execution model: the decision sweep runs level
by level from the deepest vertices to the root with a barrier between
depths. Within a depth, branch conditions for all vertices are evaluated
against state frozen at the barrier (phase 1, pure reads); updates are then
committed grouped by parent (phase 2), with same-parent commits serialized
in sibling order because they add into one parent cell. Cluster counting
follows the canonical within-depth order and stops exactly at the k-th cut,
so the output is field-for-field identical to the sequential engine.

The reusable primitives (min_reduce, sum_reduce, exclusive_scan) are
re-exported from here; see `_primitives` for the fixed combination trees
that make them worker-count independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._primitives import (
    WORKERS_ENV_VAR,
    WorkerPool,
    exclusive_scan,
    min_reduce,
    resolve_workers,
    sum_reduce,
)
from .affinity import Extrema, NodeWeights
from .isoperim import DecisionOutcome, MisoResult, run_bisection, _validate_instance
from .mst import NO_VERTEX, RootedTree

__all__ = [
    "WORKERS_ENV_VAR",
    "WorkerPool",
    "DepthSchedule",
    "exclusive_scan",
    "min_reduce",
    "par_decide",
    "par_solve_miso",
    "resolve_workers",
    "sum_reduce",
]

# Vertices per phase-1 evaluation chunk; fixed so the chunk decomposition
# (and hence the result) is independent of the worker count.
_LEVEL_CHUNK = 8192


@dataclass(eq=False)
class DepthSchedule:
    """Execution plan for the level-synchronous sweep.

    levels[i] holds the vertices of depth (max_depth - i) grouped by parent,
    each group in ascending sibling rank; canonical_order[i] is the same
    vertex set in sweep order (the reverse-BFS restriction to that depth,
    i.e. groups reversed and each group in descending sibling rank).
    """

    levels: list[list[np.ndarray]]
    canonical_order: list[np.ndarray]
    depths: list[int]

    @classmethod
    def from_tree(cls, tree: RootedTree) -> "DepthSchedule":
        top_down = tree.bfs_order[::-1]
        depth_of = tree.depth[top_down]
        levels: list[list[np.ndarray]] = []
        canonical: list[np.ndarray] = []
        depths: list[int] = []
        for d in range(tree.max_depth, -1, -1):
            members = top_down[depth_of == d]
            parents = tree.parent[members]
            split_at = np.flatnonzero(parents[1:] != parents[:-1]) + 1
            groups = [g for g in np.split(members, split_at)]
            levels.append(groups)
            canonical.append(members[::-1].copy())
            depths.append(d)
        return cls(levels=levels, canonical_order=canonical, depths=depths)


def _branch_conditions(
    fvals: np.ndarray,
    pw: np.ndarray,
    ow: np.ndarray,
    N: float,
    pool: Optional[WorkerPool],
) -> tuple[np.ndarray, np.ndarray]:
    """Phase 1: evaluate both branch inequalities for a whole level.

    Uses the same expression shapes as the sequential engine
    (f + p <= N*omega, p - f < N*omega) so each vertex's branch decision is
    bitwise identical. Large levels are split into fixed-size chunks; the
    chunk boundaries depend only on the level size, never the worker count.
    """
    size = fvals.shape[0]
    if pool is not None and pool.workers > 1 and size > _LEVEL_CHUNK:
        spans = [(s, min(s + _LEVEL_CHUNK, size)) for s in range(0, size, _LEVEL_CHUNK)]

        def eval_span(span):
            lo, hi = span
            rhs = N * ow[lo:hi]
            return (fvals[lo:hi] + pw[lo:hi]) <= rhs, (pw[lo:hi] - fvals[lo:hi]) < rhs

        parts = pool.map(eval_span, spans)
        cut_cond = np.concatenate([c for c, _ in parts])
        join_cond = np.concatenate([j for _, j in parts])
        return cut_cond, join_cond
    rhs = N * ow
    return (fvals + pw) <= rhs, (pw - fvals) < rhs


def par_decide(
    tree: RootedTree,
    weights: NodeWeights,
    k: int,
    N: float,
    *,
    workers: Optional[int] = None,
    schedule: Optional[DepthSchedule] = None,
    trace_events: Optional[list] = None,
) -> DecisionOutcome:
    """Level-synchronous decision sweep; same contract and output as decide.

    trace_events, when given, receives ("phase1", depth, read_cells) and
    ("phase2", depth, written_cells) tuples recording which omega/p state
    cells each phase touched, for schedule-correctness assertions.
    """
    _validate_instance(tree, weights, k)
    if not np.isfinite(N):
        raise ValueError(f"threshold must be finite, got {N}")
    if schedule is None:
        schedule = DepthSchedule.from_tree(tree)
    pool = WorkerPool(workers)

    n = tree.n
    parent = tree.parent
    omega_work = weights.omega.copy()
    p_work = weights.p.copy()
    merged = np.arange(n, dtype=np.int64)
    cut = np.zeros(n, dtype=np.int8)
    sparsities: list[float] = []
    j = 0

    for level_idx, idx in enumerate(schedule.canonical_order):
        depth = schedule.depths[level_idx]
        # phase 1: frozen reads of each vertex's own state; parents are
        # untouched until every condition of this depth is known
        fvals = tree.parent_flow[idx]
        pw = p_work[idx]
        ow = omega_work[idx]
        cut_cond, join_cond = _branch_conditions(fvals, pw, ow, N, pool)
        if trace_events is not None:
            trace_events.append(("phase1", depth, frozenset(int(v) for v in idx)))

        # phase 2: commit in canonical order, stopping at the k-th cut;
        # everything after the stop stays uncommitted, as in the
        # sequential sweep
        cut_positions = np.flatnonzero(cut_cond)
        need = k - j
        if cut_positions.size >= need:
            last = int(cut_positions[need - 1])
        else:
            last = idx.shape[0] - 1
        written: set[int] = set()
        for pos in range(last + 1):
            v = int(idx[pos])
            u = int(parent[v])
            if cut_cond[pos]:
                cut[v] = 1
                sparsities.append(float((fvals[pos] + pw[pos]) / ow[pos]))
                if u != NO_VERTEX:
                    p_work[u] += fvals[pos]
                    written.add(u)
            elif join_cond[pos]:
                merged[v] = u
                omega_work[u] += ow[pos]
                p_work[u] += pw[pos]
                written.add(u)
            else:
                if u != NO_VERTEX:
                    p_work[u] += fvals[pos]
                    written.add(u)
        j += min(int(cut_positions.size), need)
        if trace_events is not None:
            trace_events.append(("phase2", depth, frozenset(written)))
        if j >= k:
            break

    # resolve merge chains by pointer doubling; chains only run child ->
    # parent, so this converges in O(log depth) rounds to the same
    # representatives the sequential engine finds
    rep = merged
    while True:
        nxt = rep[rep]
        if np.array_equal(nxt, rep):
            break
        rep = nxt
    eta = np.where(cut[rep] == 1, rep, np.int64(NO_VERTEX))
    return DecisionOutcome(
        feasible=(j == k),
        clusters_found=j,
        cut=cut,
        eta=eta,
        cluster_sparsities=sparsities,
    )


def par_solve_miso(
    tree: RootedTree,
    weights: NodeWeights,
    extrema: Extrema,
    k: int,
    *,
    workers: Optional[int] = None,
) -> MisoResult:
    """Exact k-th isoperimetric number via the level-synchronous engine.

    Shares the bisection driver with the sequential engine; only the
    decision sweep differs. Witness cut/eta arrays are kept per feasible
    round and labels are reconstructed once at the end, never per round.
    """
    schedule = DepthSchedule.from_tree(tree)
    return run_bisection(
        tree, weights, extrema, k,
        lambda N: par_decide(
            tree, weights, k, N, workers=workers, schedule=schedule
        ),
    )
