"""Time the pipeline phases over doubling sizes and fit log-log slopes.

Expected shape: the distance/mass phase is quadratic in n (dense matrix),
the partition phase stays near linear, so the affinity work dominates as n
grows. Writes the raw records as CSV next to this script.
"""

import os

import numpy as np

from isoclust import benchmark, write_bench_csv

sizes = [512, 1024, 2048, 4096]
records = benchmark(
    sizes=sizes, dims=[5], ks=[8], engines=["seq"], seeds=[4], repetitions=3
)

print(f"{'n':>6} {'affinity_ms':>12} {'mst_ms':>10} {'partition_ms':>13} {'total_ms':>10}")
for r in records:
    print(f"{r.n:6d} {r.affinity_ms:12.1f} {r.mst_ms:10.1f} {r.partition_ms:13.1f} {r.total_ms:10.1f}")

logn = np.log2(sizes)
for phase in ("affinity_ms", "mst_ms", "partition_ms"):
    times = [getattr(r, phase) for r in records]
    slope = np.polyfit(logn, np.log2(times), 1)[0]
    print(f"{phase}: time ~ n^{slope:.2f}")

out = os.path.join(os.path.dirname(__file__), "scaling.csv")
write_bench_csv(records, out)
print("wrote", out)
