from __future__ import annotations

import numpy as np
import pytest

from microkg.manifold import ManifoldError, reduce_dimensions
from microkg.relation_cluster import ClusteringConfig


def blobs(rng, n_per=100, dim=300, separation=10.0, sigma=0.05, k=3):
    centers = rng.normal(0, 1, size=(k, dim))
    centers = centers / np.linalg.norm(centers, axis=1, keepdims=True) * separation
    points = np.concatenate([c + rng.normal(0, sigma, size=(n_per, dim)) for c in centers])
    labels = np.repeat(np.arange(k), n_per)
    return points, labels


def test_deterministic_for_fixed_seed():
    rng = np.random.default_rng(3)
    x, _ = blobs(rng, n_per=40, dim=50)
    cfg = ClusteringConfig(n_neighbors=10, min_dist=0.1, target_dim=2, seed=11)
    first = reduce_dimensions(x, cfg)
    second = reduce_dimensions(x, cfg)
    assert np.array_equal(first, second)


def test_row_order_preserved_under_permutation_of_blobs():
    # each input row maps to the output row at the same position: shifting a
    # single point must shift exactly that output row's neighborhood
    rng = np.random.default_rng(5)
    x, labels = blobs(rng, n_per=30, dim=40)
    cfg = ClusteringConfig(n_neighbors=8, min_dist=0.0, target_dim=2, seed=2)
    emb = reduce_dimensions(x, cfg)
    assert emb.shape == (90, 2)
    # rows of one blob land together
    for lab in range(3):
        mine = emb[labels == lab]
        others = emb[labels != lab]
        spread = np.linalg.norm(mine - mine.mean(axis=0), axis=1).mean()
        gap = np.linalg.norm(others - mine.mean(axis=0), axis=1).min()
        assert gap > spread


def test_blob_separation_distance_oracle():
    rng = np.random.default_rng(0)
    x, labels = blobs(rng, n_per=100, dim=300)
    cfg = ClusteringConfig(n_neighbors=15, min_dist=0.0, target_dim=2, seed=7)
    emb = reduce_dimensions(x, cfg)
    diff = emb[:, None, :] - emb[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    same = labels[:, None] == labels[None, :]
    iu = np.triu_indices(len(labels), k=1)
    intra = dist[iu][same[iu]]
    inter = dist[iu][~same[iu]]
    threshold = np.quantile(inter, 0.05)
    assert (intra < threshold).mean() >= 0.95


def test_too_few_points_raises():
    cfg = ClusteringConfig(n_neighbors=5, target_dim=2, seed=0)
    with pytest.raises(ManifoldError, match="n_neighbors"):
        reduce_dimensions(np.zeros((4, 10)), cfg)


def test_target_dim_must_reduce():
    cfg = ClusteringConfig(n_neighbors=2, target_dim=10, seed=0)
    with pytest.raises(ManifoldError, match="target_dim"):
        reduce_dimensions(np.zeros((8, 4)), cfg)
