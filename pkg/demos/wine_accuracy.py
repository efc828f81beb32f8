"""Cluster the Wine measurements and score against the cultivar labels.

The scale parameter matters: sweep a few multiples of the automatic choice
and report the misclassification rate (best matching of clusters to
classes, residuals count as errors) for each. Needs scikit-learn for the
dataset only.
"""

from sklearn.datasets import load_wine

from isoclust import (
    auto_sigma,
    distance_matrix,
    misclassification_rate,
    run_pipeline,
)

wine = load_wine()
points, truth = wine.data, wine.target
print(f"wine: {points.shape[0]} samples, {points.shape[1]} features, 3 cultivars")

base = auto_sigma(distance_matrix(points))
print(f"auto sigma = {base:.1f}\n")

best = None
for factor in (0.25, 0.5, 1.0, 2.0, 4.0):
    run = run_pipeline(points, k=3, sigma=factor * base)
    rate = misclassification_rate(run.result.labels, truth)
    residuals = int((run.result.labels == 0).sum())
    print(f"sigma = {factor:4.2f} x auto: misclassification {rate:.3f}, {residuals} residuals")
    if best is None or rate < best[1]:
        best = (factor, rate)

print(f"\nbest: {best[1]:.3f} at {best[0]} x auto")
