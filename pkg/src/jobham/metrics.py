"""Classification and ranking evaluation metrics.

Plain functions in the sklearn.metrics spirit. Division-by-zero cases
(precision/recall/F1 with empty denominators, NDCG of an all-zero
relevance list) return 0 by convention so dashboards always get a total
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def accuracy(c: ConfusionCounts) -> float:
    """Correct predictions over all predictions."""
    if c.total == 0:
        raise ValueError("all counts are zero")
    return (c.tp + c.tn) / c.total


def precision(c: ConfusionCounts) -> float:
    denom = c.tp + c.fp
    return c.tp / denom if denom else 0.0


def recall(c: ConfusionCounts) -> float:
    denom = c.tp + c.fn
    return c.tp / denom if denom else 0.0


def f1(c: ConfusionCounts) -> float:
    p, r = precision(c), recall(c)
    return 2 * p * r / (p + r) if p + r else 0.0


def mrr(ranks, n_queries: int | None = None) -> float:
    """Mean reciprocal rank.

    Each entry is the 1-based rank of the first relevant result for one
    query; None (or infinity) marks a query with no hit and contributes 0.
    The divisor defaults to the number of entries.
    """
    ranks = list(ranks)
    total = 0.0
    for rank in ranks:
        if rank is None or rank == math.inf:
            continue
        if rank < 1:
            raise ValueError(f"rank must be >= 1, got {rank}")
        total += 1.0 / rank
    q = len(ranks) if n_queries is None else n_queries
    if q < 1:
        raise ValueError("need at least one query")
    return total / q


def dcg(relevances, k: int) -> float:
    """Discounted cumulative gain over the first k positions."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    total = 0.0
    for i, rel in enumerate(list(relevances)[:k], start=1):
        total += rel / math.log2(i + 1)
    return total


def ndcg(relevances, k: int) -> float:
    """DCG normalized by the ideal (descending-sorted) ordering.

    Both numerator and denominator truncate at k; an all-zero list scores
    0 by convention.
    """
    relevances = list(relevances)
    ideal = dcg(sorted(relevances, reverse=True), k)
    if ideal == 0.0:
        return 0.0
    return dcg(relevances, k) / ideal


def recall_at_k(ranked, relevant, k: int) -> float:
    """Fraction of the relevant set found in the top k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    relevant = set(relevant)
    if not relevant:
        raise ValueError("relevant set is empty")
    hits = sum(1 for item in list(ranked)[:k] if item in relevant)
    return hits / len(relevant)
