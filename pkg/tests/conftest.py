"""Shared test fixtures: instance generators, oracles, acceptance reporting."""

from __future__ import annotations

import numpy as np
import pytest

from isoclust import (
    NO_VERTEX,
    NodeWeights,
    distance_matrix,
    potentials,
    tree_from_parent_list,
)

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_RESULTS: list[tuple[int, str, str, str]] = []


def record_criterion(number: int, name: str, status: str, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((number, name, status, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, status, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"criterion {number} [{status}] {name}"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)


def random_parent_array(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random tree shape: recursive-tree attachment under a random relabeling."""
    parent = np.full(n, NO_VERTEX, dtype=np.int64)
    perm = rng.permutation(n)
    for i in range(1, n):
        parent[perm[i]] = perm[int(rng.integers(0, i))]
    return parent


def random_instance(
    rng: np.random.Generator,
    n: int | None = None,
    alpha_mode: str = "zero",
):
    """Random weighted tree instance matching the exactness-test regime.

    Flows uniform in (0, 1], masses uniform in (0.1, 2]; potentials either
    identically zero or alpha=1 potentials of a random 2-d point set.
    """
    if n is None:
        n = int(rng.integers(3, 11))
    parent = random_parent_array(rng, n)
    flows = np.zeros(n, dtype=np.float64)
    nonroot = parent != NO_VERTEX
    flows[nonroot] = 1.0 - rng.uniform(0.0, 1.0, int(nonroot.sum()))
    tree = tree_from_parent_list(parent, flows)
    omega = 2.0 - rng.uniform(0.0, 1.9, n)
    if alpha_mode == "zero":
        p = np.zeros(n, dtype=np.float64)
        alpha = 0.0
    else:
        pts = rng.uniform(0.0, 10.0, size=(n, 2))
        p = potentials(distance_matrix(pts, workers=1), 1.0, workers=1)
        alpha = 1.0
    weights = NodeWeights(omega=omega, p=p, sigma=1.0, alpha=alpha)
    return tree, weights


def kruskal_edge_set(dist: np.ndarray) -> set[tuple[int, int]]:
    """Independent MST oracle: Kruskal with union-find over sorted edges."""
    n = dist.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    order = np.lexsort((ju, iu, dist[iu, ju]))
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges: set[tuple[int, int]] = set()
    for e in order:
        a, b = find(int(iu[e])), find(int(ju[e]))
        if a != b:
            parent[a] = b
            edges.add((int(iu[e]), int(ju[e])))
            if len(edges) == n - 1:
                break
    return edges


def tree_edge_set(tree) -> set[tuple[int, int]]:
    out = set()
    for u in range(tree.n):
        p = int(tree.parent[u])
        if p != NO_VERTEX:
            out.add((min(u, p), max(u, p)))
    return out


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20260814))
