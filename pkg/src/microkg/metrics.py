"""Inter-annotator agreement and majority-vote precision arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "AnnotationMatrix",
    "DegenerateAgreementError",
    "cohen_kappa",
    "fleiss_kappa",
    "load_annotation_csv",
    "majority_precision",
]


class DegenerateAgreementError(ValueError):
    """Chance agreement is 1: kappa is undefined."""


@dataclass
class AnnotationMatrix:
    """N items x k categories; cell (i, j) counts raters assigning item i to
    category j. Every row must sum to the same rater count n >= 2."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2 or self.counts.shape[1] < 2:
            raise ValueError("need an N x k matrix with k >= 2")
        if (self.counts < 0).any():
            raise ValueError("counts must be non-negative")
        row_sums = self.counts.sum(axis=1)
        if row_sums.size == 0 or not (row_sums == row_sums[0]).all():
            raise ValueError("every item needs the same number of ratings")
        if row_sums[0] < 2:
            raise ValueError("need at least 2 raters")

    @property
    def n_raters(self) -> int:
        return int(self.counts.sum(axis=1)[0])


def fleiss_kappa(matrix: AnnotationMatrix) -> float:
    """(p_o - p_e) / (1 - p_e) for >= 3 raters over categorical items."""
    counts = matrix.counts.astype(np.float64)
    n = matrix.n_raters
    p_o = float(np.mean((np.sum(counts * counts, axis=1) - n) / (n * (n - 1))))
    proportions = counts.sum(axis=0) / counts.sum()
    p_e = float(np.sum(proportions * proportions))
    if p_e == 1.0:
        raise DegenerateAgreementError("all ratings fall in one category")
    return (p_o - p_e) / (1.0 - p_e)


def cohen_kappa(a, b) -> float:
    """Pairwise chance-corrected agreement between two label vectors."""
    a = list(a)
    b = list(b)
    if not a or len(a) != len(b):
        raise ValueError("label vectors must be non-empty and equally long")
    n = len(a)
    p_o = sum(1 for x, y in zip(a, b) if x == y) / n
    categories = set(a) | set(b)
    p_e = sum((a.count(c) / n) * (b.count(c) / n) for c in categories)
    if p_e == 1.0:
        raise DegenerateAgreementError("both raters use a single category")
    return (p_o - p_e) / (1.0 - p_e)


def majority_precision(votes) -> float:
    """Fraction of items at least 2 of 3 raters marked True."""
    votes = np.asarray(votes, dtype=bool)
    if votes.ndim != 2 or votes.shape[1] != 3:
        raise ValueError("expected an N x 3 vote matrix")
    return float(np.mean(votes.sum(axis=1) >= 2))


def load_annotation_csv(path: str | Path) -> AnnotationMatrix:
    """One row of per-category counts per item."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rows.append([int(v) for v in line.split(",")])
    return AnnotationMatrix(np.array(rows, dtype=np.int64))
