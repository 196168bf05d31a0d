"""Manifold-aware dimensionality reduction (UMAP algorithm).

Exact k-nearest-neighbor graph, smoothed local connectivity, fuzzy-union
symmetrization, spectral initialization, and stochastic cross-entropy layout
with negative sampling. Deterministic for a fixed seed; the layout loop is
the package's hottest kernel and runs jitted unless ``MICROKG_NO_NUMBA`` is
set, in which case a vectorized batch variant takes over.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import curve_fit

from .kernels import NUMBA_ENABLED, maybe_njit, pairwise_distances

__all__ = ["ManifoldError", "reduce_dimensions"]

SMOOTH_K_TOLERANCE = 1e-5
MIN_K_DIST_SCALE = 1e-3
DEFAULT_EPOCHS_SMALL = 500
DEFAULT_EPOCHS_LARGE = 200
NEGATIVE_SAMPLE_RATE = 5
INITIAL_ALPHA = 1.0
REPULSION_GAMMA = 1.0


class ManifoldError(ValueError):
    pass


@maybe_njit(cache=True)
def _smooth_knn(distances: np.ndarray, k: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-point bandwidth sigma and connectivity offset rho such that the
    smoothed neighborhood cardinality hits log2(k)."""
    n = distances.shape[0]
    target = np.log2(k)
    rho = np.zeros(n, dtype=np.float64)
    sigma = np.zeros(n, dtype=np.float64)
    mean_all = np.mean(distances)
    for i in range(n):
        row = distances[i]
        nonzero = row[row > 0.0]
        if nonzero.shape[0] > 0:
            rho[i] = nonzero[0]
        lo = 0.0
        hi = np.inf
        mid = 1.0
        for _ in range(64):
            psum = 0.0
            for j in range(1, row.shape[0]):
                d = row[j] - rho[i]
                if d > 0.0:
                    psum += np.exp(-d / mid)
                else:
                    psum += 1.0
            if abs(psum - target) < SMOOTH_K_TOLERANCE:
                break
            if psum > target:
                hi = mid
                mid = (lo + hi) / 2.0
            else:
                lo = mid
                mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
        sigma[i] = mid
        if rho[i] > 0.0:
            floor = MIN_K_DIST_SCALE * np.mean(row)
        else:
            floor = MIN_K_DIST_SCALE * mean_all
        if sigma[i] < floor:
            sigma[i] = floor
    return sigma, rho


def _fuzzy_graph(x: np.ndarray, n_neighbors: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetrized fuzzy neighbor graph as sorted (head, tail, weight) edges."""
    n = x.shape[0]
    dist = pairwise_distances(x)
    np.fill_diagonal(dist, -1.0)  # self sorts first even among duplicates
    order = np.argsort(dist, axis=1, kind="stable")[:, :n_neighbors]
    knn_d = np.take_along_axis(dist, order, axis=1)
    knn_d[:, 0] = 0.0
    sigma, rho = _smooth_knn(knn_d, float(n_neighbors))

    weights = np.zeros((n, n_neighbors), dtype=np.float64)
    for j in range(1, n_neighbors):
        d = knn_d[:, j] - rho
        weights[:, j] = np.where(d <= 0.0, 1.0, np.exp(-d / sigma))

    dense = np.zeros((n, n), dtype=np.float64)
    rows = np.repeat(np.arange(n), n_neighbors - 1)
    cols = order[:, 1:].ravel()
    dense[rows, cols] = weights[:, 1:].ravel()
    sym = dense + dense.T - dense * dense.T  # probabilistic t-conorm

    heads, tails = np.nonzero(sym)
    vals = sym[heads, tails]
    return heads.astype(np.int64), tails.astype(np.int64), vals


def _find_ab(spread: float, min_dist: float) -> tuple[float, float]:
    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2 * b))

    xv = np.linspace(0, spread * 3, 300)
    yv = np.zeros(xv.shape)
    yv[xv < min_dist] = 1.0
    yv[xv >= min_dist] = np.exp(-(xv[xv >= min_dist] - min_dist) / spread)
    params, _ = curve_fit(curve, xv, yv)
    return float(params[0]), float(params[1])


def _spectral_init(
    heads: np.ndarray,
    tails: np.ndarray,
    vals: np.ndarray,
    n: int,
    dim: int,
    rng: np.random.Generator,
) -> np.ndarray:
    w = np.zeros((n, n), dtype=np.float64)
    w[heads, tails] = vals
    deg = w.sum(axis=1)
    deg[deg == 0.0] = 1.0
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = np.eye(n) - (inv_sqrt[:, None] * w) * inv_sqrt[None, :]
    try:
        _, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError:
        return rng.uniform(-10.0, 10.0, size=(n, dim))
    emb = vecs[:, 1 : dim + 1].copy()
    if emb.shape[1] < dim:  # pathological tiny graphs
        return rng.uniform(-10.0, 10.0, size=(n, dim))
    for c in range(dim):  # deterministic sign convention
        col = emb[:, c]
        if col[np.argmax(np.abs(col))] < 0:
            emb[:, c] = -col
    peak = np.abs(emb).max()
    if peak == 0.0:
        return rng.uniform(-10.0, 10.0, size=(n, dim))
    emb = emb / peak * 10.0
    return emb + rng.normal(0.0, 1e-4, size=emb.shape)


@maybe_njit(cache=True)
def _layout_sequential(
    emb: np.ndarray,
    heads: np.ndarray,
    tails: np.ndarray,
    epochs_per_sample: np.ndarray,
    a: float,
    b: float,
    n_epochs: int,
    seed: int,
) -> np.ndarray:
    np.random.seed(seed)
    n, dim = emb.shape
    n_edges = heads.shape[0]
    next_sample = epochs_per_sample.copy()
    epochs_per_negative = epochs_per_sample / NEGATIVE_SAMPLE_RATE
    next_negative = epochs_per_negative.copy()
    for epoch in range(n_epochs):
        alpha = INITIAL_ALPHA * (1.0 - epoch / n_epochs)
        for e in range(n_edges):
            if next_sample[e] > epoch:
                continue
            i = heads[e]
            j = tails[e]
            d2 = 0.0
            for k in range(dim):
                diff = emb[i, k] - emb[j, k]
                d2 += diff * diff
            if d2 > 0.0:
                coeff = (-2.0 * a * b * d2 ** (b - 1.0)) / (a * d2**b + 1.0)
            else:
                coeff = 0.0
            for k in range(dim):
                grad = coeff * (emb[i, k] - emb[j, k])
                if grad > 4.0:
                    grad = 4.0
                elif grad < -4.0:
                    grad = -4.0
                emb[i, k] += alpha * grad
                emb[j, k] -= alpha * grad
            next_sample[e] += epochs_per_sample[e]
            n_neg = int((epoch - next_negative[e]) / epochs_per_negative[e])
            for _ in range(n_neg):
                j2 = np.random.randint(0, n)
                if j2 == i:
                    continue
                d2 = 0.0
                for k in range(dim):
                    diff = emb[i, k] - emb[j2, k]
                    d2 += diff * diff
                if d2 > 0.0:
                    coeff = (2.0 * REPULSION_GAMMA * b) / (
                        (0.001 + d2) * (a * d2**b + 1.0)
                    )
                else:
                    coeff = 0.0
                for k in range(dim):
                    if coeff > 0.0:
                        grad = coeff * (emb[i, k] - emb[j2, k])
                        if grad > 4.0:
                            grad = 4.0
                        elif grad < -4.0:
                            grad = -4.0
                    else:
                        grad = 4.0
                    emb[i, k] += alpha * grad
            next_negative[e] += n_neg * epochs_per_negative[e]
    return emb


def _layout_batched(
    emb: np.ndarray,
    heads: np.ndarray,
    tails: np.ndarray,
    epochs_per_sample: np.ndarray,
    a: float,
    b: float,
    n_epochs: int,
    seed: int,
) -> np.ndarray:
    """Vectorized numpy fallback: per-epoch batched updates instead of the
    reference's per-edge sequential walk."""
    rng = np.random.default_rng(seed)
    n = emb.shape[0]
    next_sample = epochs_per_sample.copy()
    epochs_per_negative = epochs_per_sample / NEGATIVE_SAMPLE_RATE
    next_negative = epochs_per_negative.copy()

    def masked_pow(d2: np.ndarray, exponent: float) -> np.ndarray:
        out = np.zeros_like(d2)
        mask = d2 > 0.0
        out[mask] = d2[mask] ** exponent
        return out

    for epoch in range(n_epochs):
        alpha = INITIAL_ALPHA * (1.0 - epoch / n_epochs)
        due = next_sample <= epoch
        if due.any():
            h = heads[due]
            t = tails[due]
            diff = emb[h] - emb[t]
            d2 = np.sum(diff * diff, axis=1)
            coeff = np.where(
                d2 > 0.0,
                (-2.0 * a * b * masked_pow(d2, b - 1.0)) / (a * masked_pow(d2, b) + 1.0),
                0.0,
            )
            grad = np.clip(coeff[:, None] * diff, -4.0, 4.0)
            np.add.at(emb, h, alpha * grad)
            np.add.at(emb, t, -alpha * grad)
            next_sample[due] += epochs_per_sample[due]

            n_neg = ((epoch - next_negative[due]) / epochs_per_negative[due]).astype(
                np.int64
            )
            n_neg = np.maximum(n_neg, 0)
            total = int(n_neg.sum())
            if total:
                rep = np.repeat(h, n_neg)
                j2 = rng.integers(0, n, size=total)
                keep = rep != j2
                rep, j2 = rep[keep], j2[keep]
                diff = emb[rep] - emb[j2]
                d2 = np.sum(diff * diff, axis=1)
                coeff = np.where(
                    d2 > 0.0,
                    (2.0 * REPULSION_GAMMA * b)
                    / ((0.001 + d2) * (a * masked_pow(d2, b) + 1.0)),
                    0.0,
                )
                grad = np.where(
                    coeff[:, None] > 0.0,
                    np.clip(coeff[:, None] * diff, -4.0, 4.0),
                    4.0,
                )
                np.add.at(emb, rep, alpha * grad)
            next_negative[due] += n_neg * epochs_per_negative[due]
    return emb


def reduce_dimensions(x: np.ndarray, config, n_epochs: int | None = None) -> np.ndarray:
    """Reduce rows of ``x`` to ``config.target_dim`` dimensions.

    Deterministic for a fixed ``config.seed``; row order is preserved.
    Raises ManifoldError when there are fewer points than
    ``config.n_neighbors + 1`` or the target dimension is not a reduction.
    """
    x = np.asarray(x, dtype=np.float64)
    n, d = x.shape
    if n < config.n_neighbors + 1:
        raise ManifoldError(
            f"need at least n_neighbors+1={config.n_neighbors + 1} points, got {n}"
        )
    if config.target_dim >= d:
        raise ManifoldError(f"target_dim {config.target_dim} must be < input dim {d}")
    if n_epochs is None:
        n_epochs = DEFAULT_EPOCHS_SMALL if n <= 10_000 else DEFAULT_EPOCHS_LARGE

    heads, tails, vals = _fuzzy_graph(x, config.n_neighbors)
    # Drop edges sampled less than once over the whole optimization.
    floor = vals.max() / float(n_epochs)
    keep = vals >= floor
    heads, tails, vals = heads[keep], tails[keep], vals[keep]
    order = np.lexsort((tails, heads))  # canonical edge order for determinism
    heads, tails, vals = heads[order], tails[order], vals[order]

    rng = np.random.default_rng(config.seed)
    emb = _spectral_init(heads, tails, vals, n, config.target_dim, rng)
    a, b = _find_ab(1.0, config.min_dist)
    epochs_per_sample = n_epochs / (vals / vals.max())
    layout = _layout_sequential if NUMBA_ENABLED else _layout_batched
    emb = layout(
        np.ascontiguousarray(emb),
        heads,
        tails,
        epochs_per_sample,
        a,
        b,
        int(n_epochs),
        int(config.seed),
    )
    return np.asarray(emb, dtype=np.float64)
