"""Rank fusion: normalization, linear combination, reciprocal rank fusion,
Borda counting, and round-robin interleaving.

Items missing from a ranking contribute zero to every fuser. The output
item set is always the union of the input item sets, ordered by fused
score with ties broken by ascending item id.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Ranking:
    """Ordered (item, score) list from one engine."""

    items: tuple[tuple[str, float], ...]
    engine: str = ""

    def __post_init__(self):
        ids = [item for item, _ in self.items]
        if len(ids) != len(set(ids)):
            raise ValueError("ranking items must be unique")

    @classmethod
    def from_pairs(cls, pairs, engine: str = "") -> "Ranking":
        ordered = sorted(pairs, key=lambda p: (-p[1], p[0]))
        return cls(tuple(ordered), engine)

    def ids(self) -> list[str]:
        return [item for item, _ in self.items]

    def rank_of(self, item: str) -> int | None:
        """1-based rank, or None when absent."""
        for rank, (candidate, _) in enumerate(self.items, start=1):
            if candidate == item:
                return rank
        return None

    def __len__(self) -> int:
        return len(self.items)


def minmax_normalize(ranking: Ranking) -> Ranking:
    """Affine rescale of scores onto [0, 1]; constant input maps to 1.0."""
    if not ranking.items:
        return ranking
    scores = [score for _, score in ranking.items]
    lo, hi = min(scores), max(scores)
    if hi == lo:
        items = tuple((item, 1.0) for item, _ in ranking.items)
    else:
        items = tuple((item, (score - lo) / (hi - lo)) for item, score in ranking.items)
    return Ranking(items, ranking.engine)


def linear_combine(weighted: list[tuple[float, Ranking]]) -> Ranking:
    """Weighted sum of scores; absent items contribute zero."""
    if not weighted:
        raise ValueError("need at least one ranking")
    if any(w < 0 for w, _ in weighted) or sum(w for w, _ in weighted) <= 0:
        raise ValueError("weights must be nonnegative with a positive sum")
    fused: dict[str, float] = {}
    for weight, ranking in weighted:
        for item, score in ranking.items:
            fused[item] = fused.get(item, 0.0) + weight * score
    return Ranking.from_pairs(fused.items(), "linear")


def rrf(rankings: list[Ranking], k0: int = 60) -> Ranking:
    """Reciprocal rank fusion: score(d) = Σ 1/(k0 + rank(d))."""
    fused: dict[str, float] = {}
    for ranking in rankings:
        for rank, (item, _) in enumerate(ranking.items, start=1):
            fused[item] = fused.get(item, 0.0) + 1.0 / (k0 + rank)
    return Ranking.from_pairs(fused.items(), "rrf")


def borda(rankings: list[Ranking]) -> Ranking:
    """Borda count: each ranking awards the number of items it places
    strictly below the item; absent items score zero for that ranking."""
    fused: dict[str, float] = {}
    for ranking in rankings:
        size = len(ranking)
        for rank, (item, _) in enumerate(ranking.items, start=1):
            fused[item] = fused.get(item, 0.0) + (size - rank)
    return Ranking.from_pairs(fused.items(), "borda")


def interleave(rankings: list[Ranking]) -> Ranking:
    """Round-robin by rank position, skipping already-emitted items.

    Positions get synthetic descending scores (1/position) so the result
    is still a valid ranking.
    """
    emitted: list[str] = []
    seen: set[str] = set()
    cursors = [0] * len(rankings)
    progress = True
    while progress:
        progress = False
        for idx, ranking in enumerate(rankings):
            while cursors[idx] < len(ranking) and ranking.items[cursors[idx]][0] in seen:
                cursors[idx] += 1
            if cursors[idx] < len(ranking):
                item = ranking.items[cursors[idx]][0]
                cursors[idx] += 1
                seen.add(item)
                emitted.append(item)
                progress = True
    items = tuple((item, 1.0 / (rank + 1)) for rank, item in enumerate(emitted))
    return Ranking(items, "interleave")
