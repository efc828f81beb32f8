"""Dense Euclidean affinity structure over a point set.

The similarity between two points is exp(-d/sigma) ("flow"); each vertex
carries a similarity mass omega (sum of flows to all other vertices) and an
isolation potential p (alpha times the sum of its distances). All reductions
go through the fixed-shape deterministic folds in `_primitives`, so results
do not depend on the worker count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from ._primitives import WorkerPool, min_reduce, pairwise_row_sums, sum_reduce

if TYPE_CHECKING:
    from .mst import RootedTree

# Beyond this, the dense float64 matrix alone exceeds 16 GiB.
MAX_POINTS = 46340

# Rows per block when filling the matrix / reducing rows. Fixed by problem
# size, never by worker count, so partitioned results are reproducible.
_ROW_BLOCK = 1024


@dataclass
class NodeWeights:
    """Per-vertex similarity mass and isolation potential."""

    omega: np.ndarray
    p: np.ndarray
    sigma: float
    alpha: float

    def __post_init__(self):
        self.omega = np.ascontiguousarray(self.omega, dtype=np.float64)
        self.p = np.ascontiguousarray(self.p, dtype=np.float64)
        if self.omega.shape != self.p.shape or self.omega.ndim != 1:
            raise ValueError(
                f"omega and p must be 1-d arrays of equal length, got "
                f"{self.omega.shape} and {self.p.shape}"
            )
        if not (self.sigma > 0):
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    @property
    def n(self) -> int:
        return self.omega.shape[0]


@dataclass
class Extrema:
    """Sums and minima of tree-edge flows, vertex masses and potentials."""

    phi_star_sum: float
    phi_star_min: float
    omega_star_sum: float
    omega_star_min: float
    p_star_sum: float
    p_star_min: float


def _validate_points(points: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(points, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"points must be a 2-d array, got shape {x.shape}")
    n, d = x.shape
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    if d < 1:
        raise ValueError("points must have at least one coordinate")
    if not np.isfinite(x).all():
        raise ValueError("points must be finite")
    return x


def _check_matrix_shape(dist: np.ndarray) -> np.ndarray:
    """O(n) structural check: square, at least 2 points, zero diagonal.

    The consumers of a distance matrix assume a valid one (symmetric,
    finite, nonnegative); full verification is validate_distance_matrix,
    deliberately not rerun on every O(n^2) pass.
    """
    d = np.ascontiguousarray(dist, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if d.shape[0] < 2:
        raise ValueError("distance matrix needs at least 2 points")
    if (np.diagonal(d) != 0).any():
        raise ValueError("distance matrix must have a zero diagonal")
    return d


def validate_distance_matrix(dist: np.ndarray) -> np.ndarray:
    """Check shape, symmetry, zero diagonal and nonnegativity.

    Tiled so the symmetry check never strides a large matrix column-wise;
    a whole-matrix d == d.T walk is an order of magnitude slower than
    mirrored square tiles once the matrix falls out of cache.
    """
    d = _check_matrix_shape(dist)
    n = d.shape[0]
    for lo in range(0, n, _ROW_BLOCK):
        hi = min(lo + _ROW_BLOCK, n)
        band = d[lo:hi, lo:]
        if not np.isfinite(band).all():
            raise ValueError("distance matrix must be finite")
        if (band < 0).any():
            raise ValueError("distances must be nonnegative")
        for cl in range(lo, n, _ROW_BLOCK):
            ch = min(cl + _ROW_BLOCK, n)
            if not np.array_equal(d[lo:hi, cl:ch], d[cl:ch, lo:hi].T):
                raise ValueError("distance matrix must be exactly symmetric")
    return d


def distance_matrix(
    points: np.ndarray,
    *,
    workers: Optional[int] = None,
    max_points: int = MAX_POINTS,
) -> np.ndarray:
    """Full matrix of pairwise Euclidean distances.

    Each unordered pair is computed exactly once and mirrored, so the result
    is exactly symmetric with a zero diagonal. Work is split into fixed row
    blocks; blocks write disjoint cells, so any worker count produces the
    same matrix.
    """
    x = _validate_points(points)
    n = x.shape[0]
    if n > max_points:
        raise ValueError(
            f"n={n} exceeds the dense-matrix cap of {max_points} points "
            f"({8 * n * n / 2**30:.1f} GiB would be required)"
        )
    out = np.empty((n, n), dtype=np.float64)
    pool = WorkerPool(workers)

    def fill_block(bounds):
        lo, hi = bounds
        block = x[lo:hi]
        out[lo:hi, lo:hi] = squareform(pdist(block))
        if hi < n:
            cross = cdist(block, x[hi:])
            out[lo:hi, hi:] = cross
            out[hi:, lo:hi] = cross.T

    blocks = [(s, min(s + _ROW_BLOCK, n)) for s in range(0, n, _ROW_BLOCK)]
    pool.map(fill_block, blocks)
    return out


def flow(distance, sigma: float):
    """Similarity exp(-distance/sigma), in (0, 1]; 1 exactly when distance is 0.

    Accepts scalars or arrays. Scale covariant: flow(c*d, c*sigma) = flow(d, sigma).
    """
    if not (sigma > 0):
        raise ValueError(f"sigma must be > 0, got {sigma}")
    d = np.asarray(distance, dtype=np.float64)
    if (d < 0).any():
        raise ValueError("distance must be nonnegative")
    result = np.exp(-d / sigma)
    return float(result) if np.isscalar(distance) or d.ndim == 0 else result


def vertex_weights(
    dist: np.ndarray,
    sigma: float,
    *,
    workers: Optional[int] = None,
) -> np.ndarray:
    """Similarity mass omega[i] = sum over j != i of exp(-d[i,j]/sigma).

    The self term is excluded. Each row is summed with the deterministic
    pairwise fold, one row per logical worker.
    """
    d = _check_matrix_shape(dist)
    if not (sigma > 0):
        raise ValueError(f"sigma must be > 0, got {sigma}")
    n = d.shape[0]
    omega = np.empty(n, dtype=np.float64)
    pool = WorkerPool(workers)

    def weigh_block(bounds):
        lo, hi = bounds
        flows = np.exp(-d[lo:hi] / sigma)
        flows[np.arange(hi - lo), np.arange(lo, hi)] = 0.0
        omega[lo:hi] = pairwise_row_sums(flows)

    blocks = [(s, min(s + _ROW_BLOCK, n)) for s in range(0, n, _ROW_BLOCK)]
    pool.map(weigh_block, blocks)
    return omega


def potentials(
    dist: np.ndarray,
    alpha: float,
    *,
    workers: Optional[int] = None,
) -> np.ndarray:
    """Isolation potential p[i] = alpha * sum over j of d[i,j].

    The diagonal term is zero, so its inclusion is moot. alpha = 0 yields an
    exactly zero vector.
    """
    d = _check_matrix_shape(dist)
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    n = d.shape[0]
    if alpha == 0:
        return np.zeros(n, dtype=np.float64)
    p = np.empty(n, dtype=np.float64)
    pool = WorkerPool(workers)

    def sum_block(bounds):
        lo, hi = bounds
        p[lo:hi] = alpha * pairwise_row_sums(d[lo:hi])

    blocks = [(s, min(s + _ROW_BLOCK, n)) for s in range(0, n, _ROW_BLOCK)]
    pool.map(sum_block, blocks)
    return p


def auto_sigma(dist: np.ndarray) -> float:
    """Default scaling parameter: the mean off-diagonal distance."""
    d = _check_matrix_shape(dist)
    n = d.shape[0]
    total = float(d.sum())
    mean = total / (n * (n - 1))
    if not (mean > 0):
        raise ValueError("all points coincide; no usable distance scale")
    return mean


def node_weights(
    dist: np.ndarray,
    sigma: float,
    alpha: float = 0.0,
    *,
    workers: Optional[int] = None,
) -> NodeWeights:
    """Bundle vertex_weights and potentials for one distance matrix."""
    return NodeWeights(
        omega=vertex_weights(dist, sigma, workers=workers),
        p=potentials(dist, alpha, workers=workers),
        sigma=float(sigma),
        alpha=float(alpha),
    )


def extrema(tree: "RootedTree", weights: NodeWeights) -> Extrema:
    """Sums and minima of the n-1 parent-edge flows and of omega and p.

    Flow statistics range over tree edges only; omega and p over all
    vertices. Uses the deterministic reductions, so both engines see the
    same bracket endpoints bit for bit.
    """
    n = weights.n
    if tree.n != n:
        raise ValueError(f"tree has {tree.n} vertices but weights have {n}")
    nonroot = np.arange(n) != tree.root
    flows = tree.parent_flow[nonroot]
    return Extrema(
        phi_star_sum=sum_reduce(flows),
        phi_star_min=min_reduce(flows)[0],
        omega_star_sum=sum_reduce(weights.omega),
        omega_star_min=min_reduce(weights.omega)[0],
        p_star_sum=sum_reduce(weights.p),
        p_star_min=min_reduce(weights.p)[0],
    )


def dump_matrix_csv(path: str, dist: np.ndarray) -> None:
    """Debug helper: write a distance matrix as CSV."""
    d = validate_distance_matrix(dist)
    with open(path, "w", encoding="utf-8") as fh:
        for row in d:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
