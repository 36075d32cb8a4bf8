"""Search effectiveness metrics over a single ranked list.

Every function takes the ranking as an item-id list in rank order plus the
topic's judgments. Items without judgments count as non-relevant here; the
prime variants that drop unjudged items first live in ``protocol``.
"""

from __future__ import annotations

import math


def precision_at_k(items: list[str], relevant: set[str], k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = sum(1 for item in items[:k] if item in relevant)
    return hits / k


def recall_at_k(items: list[str], relevant: set[str], k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not relevant:
        return 0.0
    hits = sum(1 for item in items[:k] if item in relevant)
    return hits / len(relevant)


def recall(items: list[str], relevant: set[str]) -> float:
    return recall_at_k(items, relevant, len(items)) if items else 0.0


def average_precision(items: list[str], relevant: set[str]) -> float:
    """AP = (1/|R|) Σ P@k over the ranks k holding relevant items."""
    if not relevant:
        return 0.0
    total = 0.0
    hits = 0
    for rank, item in enumerate(items, start=1):
        if item in relevant:
            hits += 1
            total += hits / rank
    return total / len(relevant)


def reciprocal_rank(items: list[str], relevant: set[str]) -> float:
    for rank, item in enumerate(items, start=1):
        if item in relevant:
            return 1.0 / rank
    return 0.0


def dcg_at_k(items: list[str], grades: dict[str, int], k: int) -> float:
    """DCG = r1 + Σ_{i=2..k} r_i / log2(i)."""
    total = 0.0
    for rank, item in enumerate(items[:k], start=1):
        gain = grades.get(item, 0)
        total += gain if rank == 1 else gain / math.log2(rank)
    return total


def idcg_at_k(grades: dict[str, int], k: int) -> float:
    """Ideal DCG from the reverse-sorted judged grades."""
    ideal = sorted(grades.values(), reverse=True)
    total = 0.0
    for rank, gain in enumerate(ideal[:k], start=1):
        total += gain if rank == 1 else gain / math.log2(rank)
    return total


def ndcg_at_k(items: list[str], grades: dict[str, int], k: int) -> float:
    ideal = idcg_at_k(grades, k)
    if ideal == 0.0:
        return 0.0
    return dcg_at_k(items, grades, k) / ideal


def bpref(items: list[str], relevant: set[str], judged_nonrelevant: set[str]) -> float:
    """Fraction of relevant items ranked above judged non-relevant ones.

    Each retrieved relevant item contributes 1 − min(n_above, |R|)/|R|,
    where n_above counts judged non-relevant items ranked above it;
    relevant items never retrieved contribute nothing.
    """
    if not relevant:
        return 0.0
    r = len(relevant)
    total = 0.0
    nonrel_above = 0
    for item in items:
        if item in relevant:
            total += 1.0 - min(nonrel_above, r) / r
        elif item in judged_nonrelevant:
            nonrel_above += 1
    return total / r


def mean_over_topics(values: dict[str, float]) -> float:
    if not values:
        return 0.0
    return sum(values.values()) / len(values)
