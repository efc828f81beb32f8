"""Walk through the data structures behind a run, on a dataset small enough to read.

Shows the distance matrix, the auto-selected scale, per-vertex masses, the
rooted spanning tree arrays (parent / depth / sibling rank / edge flow), and
the leaves-first processing order the solver sweeps in.
"""

import numpy as np

from isoclust import (
    auto_sigma,
    distance_matrix,
    extrema,
    node_weights,
    prim_mst,
    reverse_bfs_order,
)

rng = np.random.Generator(np.random.PCG64(3))
points = rng.uniform(0.0, 4.0, size=(7, 2))

d = distance_matrix(points)
sigma = auto_sigma(d)
print("distance matrix (rounded):")
print(np.round(d, 2))
print("sigma (mean off-diagonal distance):", round(sigma, 4))

w = node_weights(d, sigma)
print("\nomega (similarity mass per vertex):", np.round(w.omega, 3))

tree = prim_mst(d, sigma, root=0)
print("\nspanning tree, rooted at 0:")
print("  vertex :", list(range(tree.n)))
print("  parent :", tree.parent.tolist(), " (-1 marks the root)")
print("  depth  :", tree.depth.tolist())
print("  rank among siblings:", tree.child_id.tolist())
print("  flow to parent     :", np.round(tree.parent_flow, 3).tolist())

# the decision sweep consumes vertices leaves-first, root last
print("\nreverse breadth-first order:", reverse_bfs_order(tree).tolist())

ext = extrema(tree, w)
print("\nsearch bracket ingredients:")
print("  min/total tree flow:", round(ext.phi_star_min, 3), "/", round(ext.phi_star_sum, 3))
print("  min/total mass     :", round(ext.omega_star_min, 3), "/", round(ext.omega_star_sum, 3))
