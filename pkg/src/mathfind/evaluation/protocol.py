"""Ranking transforms applied before metric computation.

``prime_filter`` keeps only judged items (the ' metrics); the
visually-distinct deduplication replaces items by their visual identity
and keeps the first occurrence of each, from the top of the ranking down.
"""

from __future__ import annotations

from .files import Qrels, RunRanking


def prime_filter_items(items: list[str], judged: set[str]) -> list[str]:
    """Drop unjudged items, closing rank gaps."""
    return [item for item in items if item in judged]


def prime_filter(run: RunRanking, qrels: Qrels) -> RunRanking:
    out = RunRanking(tag=run.tag)
    for topic, entries in run.topics.items():
        judged = set(qrels.for_topic(topic))
        out.topics[topic] = [(item, score) for item, score in entries if item in judged]
    return out


def dedup_visually_distinct_items(items: list[str], visual_of: dict[str, str]) -> list[str]:
    """Keep only the first (highest-ranked) item per visual identity.

    Items with no mapping are their own identity.
    """
    seen: set[str] = set()
    kept: list[str] = []
    for item in items:
        vid = visual_of.get(item, item)
        if vid in seen:
            continue
        seen.add(vid)
        kept.append(item)
    return kept


def dedup_visually_distinct(run: RunRanking, visual_of: dict[str, str]) -> RunRanking:
    out = RunRanking(tag=run.tag)
    for topic, entries in run.topics.items():
        seen: set[str] = set()
        kept = []
        for item, score in entries:
            vid = visual_of.get(item, item)
            if vid not in seen:
                seen.add(vid)
                kept.append((item, score))
        out.topics[topic] = kept
    return out
