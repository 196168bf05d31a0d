"""Hierarchical density-based clustering of reduced relation vectors.

Backed by scikit-learn's HDBSCAN; points in low-density regions keep the
OUTLIER label (-1). Coincident inputs are one cluster by definition, which
the backend's mutual-reachability degeneracy would otherwise miss.
"""

from __future__ import annotations

import numpy as np
from sklearn.cluster import HDBSCAN

__all__ = ["OUTLIER", "cluster_density"]

OUTLIER = -1


def cluster_density(reduced: np.ndarray, config) -> np.ndarray:
    """Cluster labels (stable ids >= 0, OUTLIER for noise), row-aligned."""
    x = np.asarray(reduced, dtype=np.float64)
    n = x.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if bool(np.all(x == x[0])):
        return np.zeros(n, dtype=np.int64)
    if n < config.min_cluster_size or n <= config.min_samples:
        return np.full(n, OUTLIER, dtype=np.int64)
    model = HDBSCAN(
        min_cluster_size=config.min_cluster_size,
        min_samples=config.min_samples,
        metric="euclidean",
    )
    return model.fit_predict(x).astype(np.int64)
