#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

The dispatch flag is read at import time, so each mode runs in its own
subprocess; the parent collects and prints a comparison table.

    python benchmarks/bench_kernels.py            # run both modes
    python benchmarks/bench_kernels.py --worker   # internal, one mode
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time

import numpy as np


def time_call(fn, *args, repeat=3):
    fn(*args)  # warm-up (JIT compilation in the numba mode)
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - started)
    return best


def run_benchmarks() -> dict[str, float]:
    from microkg.kernels import (
        NUMBA_ENABLED,
        levenshtein_distance,
        pairwise_distances,
        silhouette_samples_dense,
    )
    from microkg.manifold import reduce_dimensions
    from microkg.relation_cluster import ClusteringConfig

    rng = np.random.default_rng(0)
    results: dict[str, float] = {"numba": float(NUMBA_ENABLED)}

    alphabet = list("abcdefghij ")
    texts = ["".join(rng.choice(alphabet, size=240)) for _ in range(60)]

    def lev_all_pairs():
        for i, a in enumerate(texts):
            for b in texts[i + 1 :]:
                levenshtein_distance(a, b)

    results["levenshtein_1770_pairs_240ch"] = time_call(lev_all_pairs)

    points = rng.normal(size=(1200, 2))
    labels = rng.integers(-1, 8, size=1200)
    dist = pairwise_distances(points)
    results["silhouette_1200pts"] = time_call(
        lambda: silhouette_samples_dense(dist, labels)
    )

    blob_centers = rng.normal(0, 1, size=(3, 50)) * 10
    blobs = np.concatenate(
        [c + rng.normal(0, 0.05, size=(150, 50)) for c in blob_centers]
    )
    cfg = ClusteringConfig(n_neighbors=15, min_dist=0.0, target_dim=2, seed=1)
    results["umap_layout_450pts"] = time_call(
        lambda: reduce_dimensions(blobs, cfg), repeat=1
    )
    return results


def main() -> None:
    if "--worker" in sys.argv:
        print(json.dumps(run_benchmarks()))
        return
    rows = {}
    for mode, env_value in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, MICROKG_NO_NUMBA=env_value)
        out = subprocess.run(
            [sys.executable, __file__, "--worker"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        rows[mode] = json.loads(out.stdout.strip().splitlines()[-1])
    names = [k for k in rows["numba"] if k != "numba"]
    width = max(len(n) for n in names)
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  speedup")
    for name in names:
        jit, plain = rows["numba"][name], rows["numpy"][name]
        print(f"{name:<{width}}  {jit:>9.4f}s  {plain:>9.4f}s  {plain / jit:>6.1f}x")


if __name__ == "__main__":
    main()
