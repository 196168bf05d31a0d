"""Hot numeric kernels with numba acceleration and a pure-numpy fallback.

Set ``MICROKG_NO_NUMBA=1`` to force the numpy path (used by the benchmark
and as a safety hatch on platforms without a working numba).
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "levenshtein_distance",
    "maybe_njit",
    "pairwise_distances",
    "silhouette_samples_dense",
]


def _numba_wanted() -> bool:
    flag = os.environ.get("MICROKG_NO_NUMBA", "").strip().lower()
    return flag not in {"1", "true", "yes", "on"}


NUMBA_ENABLED = _numba_wanted()
if NUMBA_ENABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def _njit(*args, **kwargs):
        # Transparent no-op decorator: the same code runs interpreted.
        if args and callable(args[0]):
            return args[0]

        def deco(func):
            return func

        return deco


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    return _njit(*args, **kwargs)


# ---------------------------------------------------------------------------
# Levenshtein edit distance
# ---------------------------------------------------------------------------


@_njit(cache=True)
def _levenshtein_numba(a: np.ndarray, b: np.ndarray) -> int:
    la, lb = a.shape[0], b.shape[0]
    prev = np.arange(lb + 1, dtype=np.int64)
    cur = np.empty(lb + 1, dtype=np.int64)
    for i in range(1, la + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ai == b[j - 1] else 1
            best = prev[j - 1] + cost
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            cur[j] = best
        prev, cur = cur, prev
    return int(prev[lb])


def _levenshtein_numpy(a: np.ndarray, b: np.ndarray) -> int:
    lb = b.shape[0]
    prev = np.arange(lb + 1, dtype=np.int64)
    offsets = np.arange(lb + 1, dtype=np.int64)
    for i, ai in enumerate(a, start=1):
        cur = np.empty(lb + 1, dtype=np.int64)
        cur[0] = i
        np.minimum(prev[:-1] + (b != ai), prev[1:] + 1, out=cur[1:])
        # Propagate insertions left-to-right: running minimum of cur[j] - j.
        cur = np.minimum.accumulate(cur - offsets) + offsets
        prev = cur
    return int(prev[lb])


def levenshtein_distance(a: str, b: str) -> int:
    """Exact edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    ca = np.array([ord(ch) for ch in a], dtype=np.int32)
    cb = np.array([ord(ch) for ch in b], dtype=np.int32)
    if NUMBA_ENABLED:
        return _levenshtein_numba(ca, cb)
    return _levenshtein_numpy(ca, cb)


# ---------------------------------------------------------------------------
# Pairwise euclidean distances
# ---------------------------------------------------------------------------


def pairwise_distances(x: np.ndarray) -> np.ndarray:
    """Dense symmetric euclidean distance matrix (float64)."""
    x = np.asarray(x, dtype=np.float64)
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    d = np.sqrt(d2)
    np.fill_diagonal(d, 0.0)
    return d


# ---------------------------------------------------------------------------
# Silhouette coefficients over pre-assigned labels
# ---------------------------------------------------------------------------


@_njit(cache=True)
def _silhouette_numba(dist: np.ndarray, labels: np.ndarray, n_clusters: int) -> np.ndarray:
    n = dist.shape[0]
    counts = np.zeros(n_clusters, dtype=np.int64)
    for i in range(n):
        if labels[i] >= 0:
            counts[labels[i]] += 1
    scores = np.zeros(n, dtype=np.float64)
    sums = np.zeros(n_clusters, dtype=np.float64)
    for i in range(n):
        li = labels[i]
        if li < 0:
            continue
        sums[:] = 0.0
        for j in range(n):
            lj = labels[j]
            if lj < 0 or j == i:
                continue
            sums[lj] += dist[i, j]
        if counts[li] <= 1:
            scores[i] = 0.0
            continue
        a = sums[li] / (counts[li] - 1)
        b = np.inf
        for c in range(n_clusters):
            if c == li or counts[c] == 0:
                continue
            mean_c = sums[c] / counts[c]
            if mean_c < b:
                b = mean_c
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return scores


def _silhouette_numpy(dist: np.ndarray, labels: np.ndarray, n_clusters: int) -> np.ndarray:
    n = dist.shape[0]
    clustered = labels >= 0
    onehot = np.zeros((n, n_clusters), dtype=np.float64)
    idx = np.nonzero(clustered)[0]
    onehot[idx, labels[idx]] = 1.0
    counts = onehot.sum(axis=0)
    sums = dist @ onehot  # row i, col c: total distance from i to cluster c
    scores = np.zeros(n, dtype=np.float64)
    for i in idx:
        li = labels[i]
        if counts[li] <= 1:
            continue
        a = sums[i, li] / (counts[li] - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            means = np.where(counts > 0, sums[i] / counts, np.inf)
        means[li] = np.inf
        b = means.min()
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return scores


def silhouette_samples_dense(dist: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Per-point silhouette ``(b - a) / max(a, b)`` from a dense distance matrix.

    Points labelled ``< 0`` are outliers: they receive 0 and are excluded as
    neighbors. Singleton clusters score 0 by convention.
    """
    labels = np.asarray(labels, dtype=np.int64)
    dist = np.asarray(dist, dtype=np.float64)
    if labels.max(initial=-1) < 0:
        return np.zeros(labels.shape[0], dtype=np.float64)
    n_clusters = int(labels.max()) + 1
    if NUMBA_ENABLED:
        return _silhouette_numba(dist, labels, n_clusters)
    return _silhouette_numpy(dist, labels, n_clusters)
