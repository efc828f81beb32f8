"""The two solver engines must agree to the last bit, not just approximately.

The sequential engine sweeps vertices one by one; the level engine processes
whole tree depths with frozen reads and committed writes. Determinism is
part of the contract: same floats for any worker count.
"""

from isoclust import (
    auto_sigma,
    distance_matrix,
    extrema,
    generate_random,
    miso_results_equal,
    node_weights,
    par_solve_miso,
    prim_mst,
    solve_miso,
)

for n, d, k, seed in ((120, 2, 3, 0), (400, 5, 6, 1), (1500, 10, 4, 2)):
    points, _ = generate_random(n, d, k, seed)
    dist = distance_matrix(points)
    sigma = auto_sigma(dist)
    w = node_weights(dist, sigma)
    tree = prim_mst(dist, sigma)
    ext = extrema(tree, w)

    seq = solve_miso(tree, w, ext, k)
    print(f"n={n:5d} d={d:2d} k={k}  miso={seq.miso!r}")
    for workers in (1, 2, 8):
        par = par_solve_miso(tree, w, ext, k, workers=workers)
        same = miso_results_equal(seq, par)
        print(f"    level engine, {workers} worker(s): bit-identical = {same}")
        assert same
