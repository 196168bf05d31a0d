"""Relation-verb clustering: embeddings, reduction, density clustering, the
silhouette-times-coverage score, grid search, and the verb -> predicate map.

Every relation surface form is embedded as the mean of its token vectors,
standardized, reduced, and density-clustered; each cluster's members map to
the lemma of the cluster's most frequent form, outliers map to themselves.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus_io import WordVectorTable
from .density import OUTLIER, cluster_density
from .kernels import pairwise_distances, silhouette_samples_dense
from .manifold import reduce_dimensions
from .relation_extract import SurfaceTriple

__all__ = [
    "ClusteringConfig",
    "ClusteringResult",
    "RelationMap",
    "RelationVector",
    "build_relation_map",
    "cluster_relations",
    "embed_relations",
    "expand_grid",
    "grid_search",
    "score",
    "select_config",
    "silhouette_mean",
    "standardize",
    "write_results_csv",
]


@dataclass(frozen=True)
class RelationVector:
    form: str
    lemma: str
    vector: np.ndarray | None  # None when every token is out of vocabulary
    frequency: int


@dataclass(frozen=True)
class ClusteringConfig:
    n_neighbors: int = 5
    min_dist: float = 0.0
    target_dim: int = 2
    min_cluster_size: int = 5
    min_samples: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.n_neighbors < 1 or self.target_dim < 1:
            raise ValueError("n_neighbors and target_dim must be positive")
        if self.min_dist < 0:
            raise ValueError("min_dist must be >= 0")
        if self.min_cluster_size < 2:
            raise ValueError("min_cluster_size must be >= 2")
        if self.min_samples < 1:
            raise ValueError("min_samples must be positive")


@dataclass
class ClusteringResult:
    config: ClusteringConfig
    labels: np.ndarray | None
    num_clusters: int
    silhouette_mean: float
    silhouette_defined: bool
    clustered_fraction: float
    score: float
    error: str | None = None


@dataclass
class RelationMap:
    entries: dict[str, str] = field(default_factory=dict)  # form -> predicate lemma

    def predicate(self, form: str) -> str:
        return self.entries[form.lower()]

    def display_label(self, form: str) -> str:
        return self.predicate(form).upper()

    def __contains__(self, form: str) -> bool:
        return form.lower() in self.entries

    def write_tsv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for form in sorted(self.entries):
                fh.write(f"{form}\t{self.entries[form].upper()}\n")

    @classmethod
    def read_tsv(cls, path: str | Path) -> "RelationMap":
        entries = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line:
                    form, label = line.split("\t")
                    entries[form] = label.lower()
        return cls(entries=entries)


# ---------------------------------------------------------------------------
# Embedding and standardization
# ---------------------------------------------------------------------------


def embed_relations(
    triples: list[SurfaceTriple], table: WordVectorTable
) -> list[RelationVector]:
    """Deduplicate relation forms (case-insensitive), counting frequency.

    A form's vector is the mean of its in-vocabulary token vectors; forms
    with no in-vocabulary token carry ``vector=None`` and are pre-assigned
    outlier status by the clustering step.
    """
    counts: dict[str, int] = {}
    lemmas: dict[str, str] = {}
    order: list[str] = []
    for triple in triples:
        form = triple.verb_surface.lower()
        if form not in counts:
            counts[form] = 0
            lemmas[form] = triple.verb_lemma.lower()
            order.append(form)
        counts[form] += 1
    out = []
    for form in order:
        token_vectors = [table.get(tok) for tok in form.split()]
        token_vectors = [v for v in token_vectors if v is not None]
        vector = None
        if token_vectors:
            vector = np.mean(np.stack(token_vectors), axis=0)
        out.append(
            RelationVector(form=form, lemma=lemmas[form], vector=vector, frequency=counts[form])
        )
    return out


def standardize(vectors: np.ndarray) -> np.ndarray:
    """Per-dimension z-score; zero-variance dimensions pass through centered."""
    x = np.asarray(vectors, dtype=np.float64)
    if x.shape[0] < 2:
        raise ValueError("standardize needs at least 2 vectors")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    centered = x - mean
    nonzero = std > 0.0
    centered[:, nonzero] /= std[nonzero]
    return centered


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------


def silhouette_mean(reduced: np.ndarray, labels: np.ndarray) -> tuple[float, bool]:
    """Mean silhouette over clustered points only; outliers are excluded both
    from the mean and as neighbors. Undefined (0.0, False) below two
    clusters."""
    labels = np.asarray(labels, dtype=np.int64)
    clustered = labels >= 0
    distinct = np.unique(labels[clustered])
    if distinct.size < 2:
        return 0.0, False
    dist = pairwise_distances(np.asarray(reduced, dtype=np.float64))
    samples = silhouette_samples_dense(dist, labels)
    return float(samples[clustered].mean()), True


def score(silhouette: float, clustered_fraction: float) -> float:
    """The clustering quality score: mean silhouette times coverage."""
    return silhouette * clustered_fraction


def _evaluate(
    x: np.ndarray, config: ClusteringConfig, n_total: int
) -> ClusteringResult:
    config.validate()
    reduced = reduce_dimensions(x, config)
    labels = cluster_density(reduced, config)
    clustered = int((labels >= 0).sum())
    fraction = clustered / n_total if n_total else 0.0
    sil, defined = silhouette_mean(reduced, labels)
    num = int(np.unique(labels[labels >= 0]).size)
    return ClusteringResult(
        config=config,
        labels=labels,
        num_clusters=num,
        silhouette_mean=sil,
        silhouette_defined=defined,
        clustered_fraction=fraction,
        score=score(sil, fraction),
    )


def grid_search(
    x: np.ndarray,
    grid: list[ClusteringConfig],
    n_total: int | None = None,
    jobs: int = 1,
) -> tuple[ClusteringConfig, list[ClusteringResult]]:
    """Evaluate every config; the best attains the maximum score (ties broken
    by fewer clusters, then grid order). Failing configs score -inf and the
    search continues."""
    if not grid:
        raise ValueError("grid must not be empty")
    total = n_total if n_total is not None else x.shape[0]

    def run(config: ClusteringConfig) -> ClusteringResult:
        try:
            return _evaluate(x, config, total)
        except Exception as exc:  # recorded, search continues
            return ClusteringResult(
                config=config,
                labels=None,
                num_clusters=0,
                silhouette_mean=0.0,
                silhouette_defined=False,
                clustered_fraction=0.0,
                score=float("-inf"),
                error=str(exc),
            )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, grid))
    else:
        results = [run(config) for config in grid]

    best = None
    for result in results:
        if best is None:
            best = result
            continue
        if result.score > best.score or (
            result.score == best.score and result.num_clusters < best.num_clusters
        ):
            best = result
    return best.config, results


def select_config(results: list[ClusteringResult], band: float = 0.95) -> ClusteringConfig:
    """Among configs scoring within ``band`` of the maximum, pick the one
    with the fewest clusters (ties: table order) - fewer clusters generalize
    better at near-equal accuracy."""
    ok = [r for r in results if r.error is None]
    if not ok:
        raise ValueError("no successful clustering result to select from")
    best_score = max(r.score for r in ok)
    eligible = [r for r in ok if r.score >= band * best_score]
    if not eligible:  # a non-positive best makes the band empty
        eligible = [r for r in ok if r.score == best_score]
    chosen = min(
        enumerate(eligible), key=lambda pair: (pair[1].num_clusters, pair[0])
    )[1]
    return chosen.config


def write_results_csv(path: str | Path, results: list[ClusteringResult]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "n_neighbors",
                "min_dist",
                "target_dim",
                "min_cluster_size",
                "min_samples",
                "seed",
                "silhouette_mean",
                "clustered_fraction",
                "num_clusters",
                "score",
                "error",
            ]
        )
        for r in results:
            c = r.config
            writer.writerow(
                [
                    c.n_neighbors,
                    f"{c.min_dist:.6f}",
                    c.target_dim,
                    c.min_cluster_size,
                    c.min_samples,
                    c.seed,
                    f"{r.silhouette_mean:.6f}",
                    f"{r.clustered_fraction:.6f}",
                    r.num_clusters,
                    f"{r.score:.6f}" if r.score != float("-inf") else "-inf",
                    r.error or "",
                ]
            )


# ---------------------------------------------------------------------------
# Mapping
# ---------------------------------------------------------------------------


def build_relation_map(
    vectors: list[RelationVector], labels: np.ndarray
) -> RelationMap:
    """Total form -> predicate map. Cluster representative: lemma of the most
    frequent member form, ties to the lexicographically smallest lemma;
    outliers map to their own lemma."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != len(vectors):
        raise ValueError("labels are not aligned with vectors")
    representatives: dict[int, str] = {}
    for cluster in np.unique(labels[labels >= 0]):
        members = [v for v, l in zip(vectors, labels) if l == cluster]
        rep = min(members, key=lambda v: (-v.frequency, v.lemma))
        representatives[int(cluster)] = rep.lemma
    entries = {}
    for vec, label in zip(vectors, labels):
        entries[vec.form] = representatives[int(label)] if label >= 0 else vec.lemma
    return RelationMap(entries=entries)


# ---------------------------------------------------------------------------
# End-to-end orchestration
# ---------------------------------------------------------------------------


@dataclass
class ClusterOutcome:
    relation_map: RelationMap
    results: list[ClusteringResult]
    selected: ClusteringConfig
    labels: np.ndarray  # aligned with `vectors`; OOV forms are outliers


def expand_grid(values: dict[str, list], seed: int) -> list[ClusteringConfig]:
    """Cartesian product of explicit value lists (first-key-major order),
    all sharing the run seed."""
    keys = list(values.keys())
    configs: list[ClusteringConfig] = []

    def rec(prefix: dict, depth: int) -> None:
        if depth == len(keys):
            configs.append(ClusteringConfig(seed=seed, **prefix))
            return
        key = keys[depth]
        for option in values[key]:
            rec({**prefix, key: option}, depth + 1)

    rec({}, 0)
    return configs


def cluster_relations(
    vectors: list[RelationVector],
    grid: list[ClusteringConfig],
    jobs: int = 1,
) -> ClusterOutcome:
    """Standardize in-vocabulary vectors, grid-search, select, and build the
    total relation map (OOV forms become outliers)."""
    in_vocab = [i for i, v in enumerate(vectors) if v.vector is not None]
    if len(in_vocab) < 2:
        labels = np.full(len(vectors), OUTLIER, dtype=np.int64)
        return ClusterOutcome(
            relation_map=build_relation_map(vectors, labels),
            results=[],
            selected=grid[0] if grid else ClusteringConfig(),
            labels=labels,
        )
    x = standardize(np.stack([vectors[i].vector for i in in_vocab]))
    _, results = grid_search(x, grid, n_total=len(vectors), jobs=jobs)
    selected = select_config(results)
    chosen = next(r for r in results if r.config == selected and r.error is None)
    labels = np.full(len(vectors), OUTLIER, dtype=np.int64)
    for pos, idx in enumerate(in_vocab):
        labels[idx] = chosen.labels[pos]
    return ClusterOutcome(
        relation_map=build_relation_map(vectors, labels),
        results=results,
        selected=selected,
        labels=labels,
    )
