"""Tests for point-set loading, saving and generation."""

import numpy as np
import pytest

from isoclust import (
    DataFormatError,
    generate_random,
    load_labels,
    load_points,
    save_labels,
    save_points,
    standardize,
)
from isoclust.dataset import class_count


class TestLoadPoints:
    def test_csv_without_labels(self, tmp_path):
        f = tmp_path / "pts.csv"
        f.write_text("0,0\n1,0\n0,1\n")
        points, labels = load_points(str(f))
        assert points.shape == (3, 2)
        assert labels is None
        assert points.dtype == np.float64

    def test_label_column_remaps_tokens_in_first_appearance_order(self, tmp_path):
        f = tmp_path / "pts.csv"
        f.write_text("0,0,A\n1,0,B\n2,0,A\n")
        points, labels = load_points(str(f), label_column=2)
        assert points.shape == (3, 2)
        assert labels.tolist() == [0, 1, 0]

    def test_numeric_labels_become_contiguous(self, tmp_path):
        f = tmp_path / "pts.csv"
        f.write_text("0,0,3\n1,0,7\n2,0,3\n3,1,7\n")
        _, labels = load_points(str(f), label_column=2)
        assert class_count(labels) == 2

    def test_whitespace_format_and_header(self, tmp_path):
        f = tmp_path / "pts.txt"
        f.write_text("x y\n0 0\n1.5 2.5\n")
        points, _ = load_points(str(f), format="whitespace", header=True)
        assert points.tolist() == [[0.0, 0.0], [1.5, 2.5]]

    def test_ragged_rows_report_row_number(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("0,0\n1,0\n1,2,3\n")
        with pytest.raises(DataFormatError, match="row 3"):
            load_points(str(f))

    def test_non_numeric_reports_row_and_column(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("0,0\n1,x\n")
        with pytest.raises(DataFormatError, match="row 2, column 2"):
            load_points(str(f))

    def test_non_finite_rejected(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("0,0\n1,inf\n")
        with pytest.raises(DataFormatError, match="non-finite"):
            load_points(str(f))

    def test_too_few_rows(self, tmp_path):
        f = tmp_path / "tiny.csv"
        f.write_text("1,2\n")
        with pytest.raises(DataFormatError, match="at least 2"):
            load_points(str(f))

    def test_label_column_out_of_range(self, tmp_path):
        f = tmp_path / "pts.csv"
        f.write_text("0,0\n1,1\n")
        with pytest.raises(DataFormatError, match="label column"):
            load_points(str(f), label_column=5)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError, match="format"):
            load_points(str(tmp_path / "x"), format="parquet")

    def test_blank_lines_skipped(self, tmp_path):
        f = tmp_path / "pts.csv"
        f.write_text("0,0\n\n1,1\n\n")
        points, _ = load_points(str(f))
        assert points.shape == (2, 2)


class TestSaveRoundTrip:
    def test_csv_round_trip_is_exact(self, tmp_path, rng):
        points = rng.normal(0.0, 1.0, size=(20, 4))
        labels = rng.integers(0, 3, 20)
        f = tmp_path / "out.csv"
        save_points(str(f), points, labels)
        loaded, lab = load_points(str(f), label_column=4)
        assert np.array_equal(loaded, points)
        assert class_count(lab) == len(np.unique(labels))

    def test_whitespace_round_trip(self, tmp_path, rng):
        points = rng.uniform(-5, 5, size=(7, 2))
        f = tmp_path / "out.txt"
        save_points(str(f), points, format="whitespace")
        loaded, _ = load_points(str(f), format="whitespace")
        assert np.array_equal(loaded, points)

    def test_labels_round_trip(self, tmp_path):
        f = tmp_path / "labels.txt"
        save_labels(str(f), np.array([0, 2, 1, 2]))
        assert load_labels(str(f)).tolist() == [0, 2, 1, 2]


class TestGenerateRandom:
    def test_shapes_and_label_range(self):
        points, labels = generate_random(50, 3, 4, seed=1)
        assert points.shape == (50, 3)
        assert labels.shape == (50,)
        assert set(labels.tolist()) == {0, 1, 2, 3}

    def test_round_robin_assignment(self):
        _, labels = generate_random(10, 2, 3, seed=9)
        assert labels.tolist() == [i % 3 for i in range(10)]

    def test_deterministic_per_seed(self):
        a, la = generate_random(40, 5, 2, seed=123)
        b, lb = generate_random(40, 5, 2, seed=123)
        c, _ = generate_random(40, 5, 2, seed=124)
        assert np.array_equal(a, b) and np.array_equal(la, lb)
        assert not np.array_equal(a, c)

    def test_spread_controls_dispersion(self):
        tight, labels = generate_random(300, 2, 1, seed=5, spread=0.01)
        wide, _ = generate_random(300, 2, 1, seed=5, spread=5.0)
        assert tight.std(axis=0).max() < wide.std(axis=0).min()
        assert labels.max() == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            generate_random(1, 2, 1, seed=0)
        with pytest.raises(ValueError):
            generate_random(5, 0, 2, seed=0)
        with pytest.raises(ValueError):
            generate_random(5, 2, 0, seed=0)
        with pytest.raises(ValueError):
            generate_random(3, 2, 5, seed=0)
        with pytest.raises(ValueError):
            generate_random(5, 2, 2, seed=0, spread=0.0)


class TestStandardize:
    def test_zero_mean_unit_std(self, rng):
        x = rng.normal(3.0, 7.0, size=(100, 3))
        z = standardize(x)
        assert np.allclose(z.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(z.std(axis=0), 1.0, atol=1e-12)

    def test_constant_column_stays_finite(self):
        x = np.array([[1.0, 2.0], [1.0, 4.0], [1.0, 6.0]])
        z = standardize(x)
        assert np.isfinite(z).all()
        assert np.allclose(z[:, 0], 0.0)


class TestClassCount:
    def test_contiguous_ok(self):
        assert class_count(np.array([0, 1, 2, 1])) == 3

    def test_gap_rejected(self):
        with pytest.raises(ValueError):
            class_count(np.array([0, 2, 2]))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            class_count(np.array([-1, 0]))
