from __future__ import annotations

import numpy as np
import pytest

from microkg.metrics import (
    AnnotationMatrix,
    DegenerateAgreementError,
    cohen_kappa,
    fleiss_kappa,
    load_annotation_csv,
    majority_precision,
)


def fleiss_reference(counts):
    """Independent re-implementation used as the oracle."""
    counts = np.asarray(counts, dtype=float)
    n_items, _ = counts.shape
    n = counts[0].sum()
    p_i = ((counts**2).sum(axis=1) - n) / (n * (n - 1))
    p_o = p_i.mean()
    p_j = counts.sum(axis=0) / (n_items * n)
    p_e = (p_j**2).sum()
    return (p_o - p_e) / (1 - p_e)


class TestFleiss:
    def test_unanimous_mixed_categories(self):
        counts = np.array([[3, 0], [0, 3], [3, 0], [0, 3]])
        assert fleiss_kappa(AnnotationMatrix(counts)) == pytest.approx(1.0)

    def test_uniform_random_near_zero(self):
        rng = np.random.default_rng(0)
        votes = rng.integers(0, 2, size=(10_000, 3))
        counts = np.stack([(votes == 0).sum(axis=1), (votes == 1).sum(axis=1)], axis=1)
        kappa = fleiss_kappa(AnnotationMatrix(counts))
        assert abs(kappa) < 0.05

    def test_matches_reference_formula(self):
        rng = np.random.default_rng(3)
        raw = rng.integers(0, 4, size=(25, 4))
        counts = np.stack([(raw == c).sum(axis=1) for c in range(4)], axis=1)
        matrix = AnnotationMatrix(counts)
        assert fleiss_kappa(matrix) == pytest.approx(fleiss_reference(counts))

    def test_degenerate_signaled(self):
        counts = np.array([[3, 0], [3, 0]])
        with pytest.raises(DegenerateAgreementError):
            fleiss_kappa(AnnotationMatrix(counts))

    def test_matrix_invariants(self):
        with pytest.raises(ValueError):
            AnnotationMatrix(np.array([[2, 1], [1, 1]]))  # unequal row sums
        with pytest.raises(ValueError):
            AnnotationMatrix(np.array([[3], [3]]))  # single category
        with pytest.raises(ValueError):
            AnnotationMatrix(np.array([[1, 0], [0, 1]]))  # lone rater

    def test_bounds_on_valid_matrices(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            raw = rng.integers(0, 3, size=(12, 5))
            counts = np.stack([(raw == c).sum(axis=1) for c in range(3)], axis=1)
            kappa = fleiss_kappa(AnnotationMatrix(counts))
            assert -1.0 <= kappa <= 1.0


class TestCohen:
    def test_identical_vectors(self):
        assert cohen_kappa(["a", "b", "a"], ["a", "b", "a"]) == pytest.approx(1.0)

    def test_checkerboard_exact_zero(self):
        assert cohen_kappa([True, True, False, False], [True, False, True, False]) == 0.0

    def test_independent_labelings_near_zero(self):
        rng = np.random.default_rng(0)
        a = rng.integers(0, 2, size=20_000).tolist()
        b = rng.integers(0, 2, size=20_000).tolist()
        assert abs(cohen_kappa(a, b)) < 0.05

    def test_symmetry_and_relabeling_invariance(self):
        rng = np.random.default_rng(5)
        a = rng.integers(0, 3, size=200).tolist()
        b = rng.integers(0, 3, size=200).tolist()
        assert cohen_kappa(a, b) == pytest.approx(cohen_kappa(b, a))
        relabel = {0: "x", 1: "y", 2: "z"}
        assert cohen_kappa([relabel[v] for v in a], [relabel[v] for v in b]) == pytest.approx(
            cohen_kappa(a, b)
        )

    def test_degenerate_signaled(self):
        with pytest.raises(DegenerateAgreementError):
            cohen_kappa(["x", "x"], ["x", "x"])


class TestMajorityPrecision:
    def test_all_true(self):
        assert majority_precision([[1, 1, 1], [1, 1, 1]]) == 1.0

    def test_half(self):
        assert majority_precision([[1, 1, 0], [0, 0, 1]]) == 0.5

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            majority_precision([[1, 1], [0, 0]])


def test_csv_round_trip(tmp_path):
    path = tmp_path / "votes.csv"
    path.write_text("3,0\n1,2\n0,3\n", encoding="utf-8")
    matrix = load_annotation_csv(path)
    assert matrix.counts.shape == (3, 2)
    assert matrix.n_raters == 3
