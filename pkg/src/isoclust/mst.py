"""Minimum spanning tree extraction in parent-list form.

The tree is stored as flat arrays (parent index, parent-edge flow, depth,
sibling rank, traversal order) so that the partitioning engines can walk it
without any pointer chasing.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._primitives import min_reduce
from .affinity import flow, validate_distance_matrix

NO_VERTEX = -1


@dataclass
class RootedTree:
    """A rooted spanning tree over vertices 0..n-1 as parallel arrays.

    parent[u] is NO_VERTEX at the root; parent_flow[u] is the similarity of
    the edge to the parent (0.0 at the root, unused); child_id[u] is u's rank
    among its siblings; bfs_order lists all vertices leaves-first so that
    every vertex appears before its parent and the root comes last.
    """

    parent: np.ndarray
    parent_flow: np.ndarray
    depth: np.ndarray
    child_id: np.ndarray
    bfs_order: np.ndarray
    root: int
    max_depth: int

    @property
    def n(self) -> int:
        return self.parent.shape[0]


def _bfs_root_first(parent: np.ndarray, child_id: np.ndarray, root: int) -> np.ndarray:
    """Breadth-first order from the root, visiting children by child_id."""
    n = parent.shape[0]
    children: list[list[int]] = [[] for _ in range(n)]
    order_by_rank = np.lexsort((child_id, parent))
    for u in order_by_rank:
        p = parent[u]
        if p != NO_VERTEX:
            children[p].append(int(u))
    out = np.empty(n, dtype=np.int64)
    queue = deque([root])
    pos = 0
    while queue:
        u = queue.popleft()
        out[pos] = u
        pos += 1
        queue.extend(children[u])
    if pos != n:
        raise ValueError("parent array does not describe one connected tree")
    return out


def reverse_bfs_order(tree: RootedTree) -> np.ndarray:
    """Traversal order for the decision pass: leaves first, root last.

    Computed as a breadth-first walk from the root (children enqueued in
    child_id order) and then reversed, so all vertices of depth D precede
    all vertices of depth D-1.
    """
    return _bfs_root_first(tree.parent, tree.child_id, tree.root)[::-1].copy()


def tree_from_parent_list(
    parent,
    parent_flow,
    root: Optional[int] = None,
) -> RootedTree:
    """Build a RootedTree from a parent array and per-edge flows.

    Depth, sibling ranks (by ascending vertex index) and the traversal order
    are derived here. The stored flow at the root is normalized to 0.0.
    """
    par = np.asarray(parent, dtype=np.int64).copy()
    flows = np.asarray(parent_flow, dtype=np.float64).copy()
    n = par.shape[0]
    if par.ndim != 1 or flows.shape != par.shape:
        raise ValueError("parent and parent_flow must be 1-d arrays of equal length")
    roots = np.flatnonzero(par == NO_VERTEX)
    if root is None:
        if roots.size != 1:
            raise ValueError(f"expected exactly one root sentinel, found {roots.size}")
        root = int(roots[0])
    elif roots.size != 1 or int(roots[0]) != root:
        raise ValueError("root does not match the parent array's sentinel")
    if (par[np.arange(n) != root] < 0).any() or (par >= n).any():
        raise ValueError("parent indices out of range")
    flows[root] = 0.0

    # sibling rank: children of each vertex ranked by ascending vertex index
    child_id = np.zeros(n, dtype=np.int64)
    child_count = np.zeros(n, dtype=np.int64)
    for u in range(n):
        p = par[u]
        if p != NO_VERTEX:
            child_id[u] = child_count[p]
            child_count[p] += 1

    depth = np.zeros(n, dtype=np.int64)
    order = _bfs_root_first(par, child_id, root)
    for u in order[1:]:
        depth[u] = depth[par[u]] + 1
    return RootedTree(
        parent=par,
        parent_flow=flows,
        depth=depth,
        child_id=child_id,
        bfs_order=order[::-1].copy(),
        root=root,
        max_depth=int(depth.max()),
    )


def prim_mst(dist: np.ndarray, sigma: float, root: int = 0) -> RootedTree:
    """Minimum spanning tree of the complete distance graph, rooted at `root`.

    Grows the tree one vertex at a time: each round takes the frontier vertex
    with the smallest distance to the tree (ties to the smallest vertex
    index, via the deterministic min reduction) and then relaxes the frontier
    against the new vertex's distance row, one writer per cell. Sibling ranks
    record insertion order; parent-edge flows are attached afterwards.
    """
    d = validate_distance_matrix(dist)
    if not (sigma > 0):
        raise ValueError(f"sigma must be > 0, got {sigma}")
    n = d.shape[0]
    if not (0 <= root < n):
        raise ValueError(f"root must be in [0, {n}), got {root}")

    parent = np.full(n, NO_VERTEX, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    child_id = np.zeros(n, dtype=np.int64)
    child_count = np.zeros(n, dtype=np.int64)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[root] = True
    best = d[root].copy()
    best_from = np.full(n, root, dtype=np.int64)

    for _ in range(n - 1):
        outside = np.flatnonzero(~in_tree)
        _, local = min_reduce(best[outside])
        u = int(outside[local])
        pu = int(best_from[u])
        parent[u] = pu
        depth[u] = depth[pu] + 1
        child_id[u] = child_count[pu]
        child_count[pu] += 1
        in_tree[u] = True
        row = d[u]
        closer = (row < best) & ~in_tree
        best[closer] = row[closer]
        best_from[closer] = u

    parent_flow = np.zeros(n, dtype=np.float64)
    nonroot = np.flatnonzero(parent != NO_VERTEX)
    parent_flow[nonroot] = flow(d[nonroot, parent[nonroot]], sigma)

    order = _bfs_root_first(parent, child_id, root)
    return RootedTree(
        parent=parent,
        parent_flow=parent_flow,
        depth=depth,
        child_id=child_id,
        bfs_order=order[::-1].copy(),
        root=root,
        max_depth=int(depth.max()),
    )


def total_distance(tree: RootedTree, dist: np.ndarray) -> float:
    """Sum of tree-edge distances (for oracle comparisons)."""
    nonroot = np.flatnonzero(tree.parent != NO_VERTEX)
    return math.fsum(float(dist[u, tree.parent[u]]) for u in nonroot)


def dump_tree(path: str, tree: RootedTree) -> None:
    """Write one line per vertex: id parent depth child_id parent_flow."""
    with open(path, "w", encoding="utf-8") as fh:
        for u in range(tree.n):
            fh.write(
                f"{u} {int(tree.parent[u])} {int(tree.depth[u])} "
                f"{int(tree.child_id[u])} {repr(float(tree.parent_flow[u]))}\n"
            )
