"""Tests for the dense affinity structure: distances, flows, masses, potentials."""

import math

import numpy as np
import pytest
from scipy.spatial.distance import cdist

import isoclust.affinity as affinity
from conftest import random_instance, random_parent_array
from isoclust import (
    NodeWeights,
    auto_sigma,
    distance_matrix,
    extrema,
    flow,
    potentials,
    tree_from_parent_list,
    vertex_weights,
)


class TestDistanceMatrix:
    def test_one_dimensional_example(self):
        d = distance_matrix(np.array([[0.0], [1.0], [3.0]]))
        assert d.tolist() == [[0, 1, 3], [1, 0, 2], [3, 2, 0]]

    def test_zero_diagonal_and_exact_symmetry(self, rng):
        x = rng.normal(0.0, 1.0, size=(73, 6))
        d = distance_matrix(x)
        assert (np.diagonal(d) == 0).all()
        assert np.array_equal(d, d.T)

    def test_coincident_points(self):
        d = distance_matrix(np.array([[2.0, 2.0], [2.0, 2.0]]))
        assert d[0, 1] == 0.0

    def test_matches_direct_computation(self, rng):
        x = rng.uniform(-3, 3, size=(40, 5))
        d = distance_matrix(x)
        assert np.allclose(d, cdist(x, x), rtol=0, atol=1e-12)

    def test_block_partition_and_workers_leave_result_unchanged(self, rng, monkeypatch):
        x = rng.normal(0.0, 2.0, size=(53, 4))
        whole = distance_matrix(x, workers=1)
        monkeypatch.setattr(affinity, "_ROW_BLOCK", 7)
        for workers in (1, 2, 3):
            assert np.array_equal(distance_matrix(x, workers=workers), whole)

    def test_triangle_inequality_on_sampled_triples(self, rng):
        x = rng.normal(0.0, 5.0, size=(60, 3))
        d = distance_matrix(x)
        for _ in range(300):
            i, j, l = rng.integers(0, 60, 3)
            assert d[i, j] <= d[i, l] + d[l, j] + 1e-9

    def test_size_cap_is_enforced(self, rng):
        x = rng.normal(0.0, 1.0, size=(12, 2))
        with pytest.raises(ValueError, match="cap"):
            distance_matrix(x, max_points=10)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            distance_matrix(np.array([[1.0, 2.0]]))
        with pytest.raises(ValueError):
            distance_matrix(np.array([[np.nan], [1.0]]))


class TestValidateDistanceMatrix:
    def good(self, n=6):
        rng = np.random.Generator(np.random.PCG64(5))
        return distance_matrix(rng.uniform(0, 10, size=(n, 3)))

    def test_accepts_valid_matrix(self):
        d = self.good()
        assert affinity.validate_distance_matrix(d) is not None

    def test_rejects_nan_and_inf(self):
        for bad in (np.nan, np.inf):
            d = self.good()
            d[1, 4] = d[4, 1] = bad
            with pytest.raises(ValueError, match="finite"):
                affinity.validate_distance_matrix(d)

    def test_rejects_negative_pair(self):
        d = self.good()
        d[2, 5] = d[5, 2] = -0.25
        with pytest.raises(ValueError, match="nonnegative"):
            affinity.validate_distance_matrix(d)

    def test_rejects_nonzero_diagonal(self):
        d = self.good()
        d[3, 3] = 1e-9
        with pytest.raises(ValueError, match="diagonal"):
            affinity.validate_distance_matrix(d)

    def test_rejects_one_sided_edit(self):
        d = self.good()
        d[0, 2] += 1e-12
        with pytest.raises(ValueError, match="symmetric"):
            affinity.validate_distance_matrix(d)

    def test_rejects_nonsquare_and_tiny(self):
        with pytest.raises(ValueError, match="square"):
            affinity.validate_distance_matrix(np.zeros((3, 4)))
        with pytest.raises(ValueError, match="at least 2"):
            affinity.validate_distance_matrix(np.zeros((1, 1)))

    def test_tiled_sweep_covers_lower_triangle(self, monkeypatch):
        # force multiple tiles, then corrupt cells in every region
        monkeypatch.setattr(affinity, "_ROW_BLOCK", 4)
        d = self.good(11)
        assert affinity.validate_distance_matrix(d) is not None
        for i, j in ((9, 1), (1, 9), (10, 6), (3, 2)):
            bad = d.copy()
            bad[i, j] *= 2.0
            with pytest.raises(ValueError, match="symmetric"):
                affinity.validate_distance_matrix(bad)
        bad = d.copy()
        bad[8, 2] = bad[2, 8] = -1.0
        with pytest.raises(ValueError, match="nonnegative"):
            affinity.validate_distance_matrix(bad)


class TestFlow:
    def test_analytic_values(self):
        assert flow(0.0, 1.0) == 1.0
        assert abs(flow(1.0, 1.0) - math.exp(-1.0)) < 1e-15

    def test_scale_covariance_is_exact(self):
        assert flow(2.0, 2.0) == flow(1.0, 1.0)

    def test_monotone_decreasing(self, rng):
        for _ in range(100):
            d1, d2 = sorted(rng.uniform(0.0, 50.0, 2))
            sigma = float(rng.uniform(0.1, 10.0))
            if d1 < d2:
                assert flow(d1, sigma) > flow(d2, sigma)

    def test_range(self, rng):
        vals = flow(rng.uniform(0.0, 100.0, 1000), 3.0)
        assert ((vals > 0) & (vals <= 1)).all()

    def test_validation(self):
        with pytest.raises(ValueError):
            flow(1.0, 0.0)
        with pytest.raises(ValueError):
            flow(-0.5, 1.0)


class TestVertexWeights:
    def test_coincident_points_self_term_excluded(self):
        d = np.zeros((2, 2))
        assert vertex_weights(d, 1.0).tolist() == [1.0, 1.0]
        d3 = np.zeros((3, 3))
        assert vertex_weights(d3, 2.0).tolist() == [2.0, 2.0, 2.0]

    def test_two_point_example(self):
        d = distance_matrix(np.array([[0.0], [math.log(2.0)]]))
        w = vertex_weights(d, 1.0)
        assert np.allclose(w, [0.5, 0.5], rtol=1e-12)

    def test_matches_sequential_row_sums(self, rng):
        x = rng.normal(0.0, 1.0, size=(50, 4))
        d = distance_matrix(x)
        sigma = 1.7
        f = np.exp(-d / sigma)
        np.fill_diagonal(f, 0.0)
        expected = f.sum(axis=1)
        got = vertex_weights(d, sigma)
        assert np.allclose(got, expected, rtol=1e-9)

    def test_range_bound(self, rng):
        x = rng.normal(0.0, 1.0, size=(30, 3))
        w = vertex_weights(distance_matrix(x), 2.0)
        assert ((w > 0) & (w <= 29.0)).all()

    def test_worker_count_independent_bitwise(self, rng, monkeypatch):
        x = rng.normal(0.0, 1.0, size=(41, 3))
        d = distance_matrix(x)
        base = vertex_weights(d, 1.3, workers=1)
        monkeypatch.setattr(affinity, "_ROW_BLOCK", 5)
        for workers in (1, 2, 4):
            assert np.array_equal(vertex_weights(d, 1.3, workers=workers), base)


class TestPotentials:
    def test_zero_alpha_is_exactly_zero(self, rng):
        x = rng.normal(0.0, 1.0, size=(20, 2))
        p = potentials(distance_matrix(x), 0.0)
        assert (p == 0.0).all()

    def test_one_dimensional_example(self):
        d = distance_matrix(np.array([[0.0], [1.0], [3.0]]))
        assert np.allclose(potentials(d, 1.0), [4.0, 3.0, 5.0], rtol=1e-12)

    def test_homogeneity(self, rng):
        x = rng.uniform(0, 4, size=(15, 3))
        d = distance_matrix(x)
        assert np.allclose(potentials(d, 2.0), 2.0 * potentials(d, 1.0), rtol=1e-15)

    def test_rejects_negative_alpha(self, rng):
        d = distance_matrix(np.array([[0.0], [1.0]]))
        with pytest.raises(ValueError):
            potentials(d, -0.1)


class TestAutoSigma:
    def test_mean_off_diagonal(self):
        d = distance_matrix(np.array([[0.0], [1.0], [3.0]]))
        assert abs(auto_sigma(d) - (1 + 3 + 2) / 3.0) < 1e-12

    def test_all_coincident_rejected(self):
        with pytest.raises(ValueError):
            auto_sigma(np.zeros((3, 3)))


class TestExtrema:
    def test_path_example(self):
        tree = tree_from_parent_list([1, 2, -1], [1.0, 0.1, 0.0])
        w = NodeWeights(omega=np.ones(3), p=np.zeros(3), sigma=1.0, alpha=0.0)
        ext = extrema(tree, w)
        assert ext.phi_star_sum == 1.1
        assert ext.phi_star_min == 0.1
        assert ext.omega_star_sum == 3.0
        assert ext.omega_star_min == 1.0
        assert ext.p_star_sum == 0.0 and ext.p_star_min == 0.0

    def test_single_edge(self):
        tree = tree_from_parent_list([-1, 0], [0.0, 0.42])
        w = NodeWeights(omega=np.ones(2), p=np.zeros(2), sigma=1.0, alpha=0.0)
        ext = extrema(tree, w)
        assert ext.phi_star_sum == 0.42 and ext.phi_star_min == 0.42

    def test_uniform_mass(self, rng):
        tree, w = _uniform_instance(rng, n=9, c=0.75)
        ext = extrema(tree, w)
        assert abs(ext.omega_star_sum - 9 * 0.75) < 1e-12
        assert ext.omega_star_min == 0.75

    def test_min_not_above_sum(self, rng):
        for _ in range(30):
            tree, w = random_instance(rng)
            ext = extrema(tree, w)
            assert ext.phi_star_min <= ext.phi_star_sum
            assert ext.omega_star_min <= ext.omega_star_sum
            assert ext.p_star_min <= ext.p_star_sum


def _uniform_instance(rng, n, c):
    parent = random_parent_array(rng, n)
    flows = np.where(parent >= 0, 0.5, 0.0)
    tree = tree_from_parent_list(parent, flows)
    w = NodeWeights(omega=np.full(n, c), p=np.zeros(n), sigma=1.0, alpha=0.0)
    return tree, w
