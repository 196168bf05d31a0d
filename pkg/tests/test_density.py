from __future__ import annotations

import numpy as np

from microkg.density import OUTLIER, cluster_density
from microkg.relation_cluster import ClusteringConfig


def test_three_separated_blobs():
    rng = np.random.default_rng(0)
    x = np.concatenate(
        [rng.normal(c, 0.05, size=(100, 2)) for c in [(0, 0), (10, 0), (0, 10)]]
    )
    cfg = ClusteringConfig(min_cluster_size=10, min_samples=5)
    labels = cluster_density(x, cfg)
    assert len(set(labels[labels >= 0])) == 3
    assert (labels == OUTLIER).mean() <= 0.05


def test_identical_points_single_cluster():
    cfg = ClusteringConfig(min_cluster_size=5, min_samples=2)
    labels = cluster_density(np.zeros((50, 2)), cfg)
    assert set(labels) == {0}


def test_uniform_sparse_scatter_all_outliers():
    rng = np.random.default_rng(1)
    x = rng.uniform(0, 100, size=(60, 2))
    cfg = ClusteringConfig(min_cluster_size=30, min_samples=15)
    labels = cluster_density(x, cfg)
    assert set(labels) == {OUTLIER}


def test_fewer_points_than_min_cluster_size():
    cfg = ClusteringConfig(min_cluster_size=10, min_samples=2)
    labels = cluster_density(np.random.default_rng(0).normal(size=(4, 2)), cfg)
    assert set(labels) == {OUTLIER}


def test_empty_input():
    cfg = ClusteringConfig()
    assert cluster_density(np.empty((0, 2)), cfg).shape == (0,)
