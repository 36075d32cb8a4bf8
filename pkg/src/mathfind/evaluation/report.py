"""Evaluation reports over a run and qrels.

Metric specs are names like ``p@10``, ``p_prime@5``, ``ndcg``, ``ndcg@10``,
``ndcg_prime``, ``map``, ``map_prime``, ``mrr``, ``bpref``, ``recall@100``.
Prime variants drop unjudged items before scoring. Binary metrics use the
binarization threshold (default 2 on the 0-3 scale); nDCG uses raw grades.

The report is TSV with columns metric, topic, value (12 decimal places),
one row per (metric, topic) plus an ``ALL`` aggregate row per metric.
Topics with no judged-relevant item are excluded from binary-metric
aggregates; the exclusion count appears as ``excluded_topics``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..errors import MathfindError
from .files import GradeScale, Qrels, RunRanking, binarize
from .protocol import dedup_visually_distinct, prime_filter_items
from .rank_metrics import (
    average_precision,
    bpref,
    dcg_at_k,
    ndcg_at_k,
    precision_at_k,
    recall_at_k,
    reciprocal_rank,
)


@dataclass(frozen=True)
class MetricSpec:
    name: str  # p, recall, ap, rr, ndcg, dcg, bpref
    k: int | None
    prime: bool

    @property
    def label(self) -> str:
        base = {"ap": "map", "rr": "mrr"}.get(self.name, self.name)
        label = f"{base}_prime" if self.prime else base
        if self.k is not None:
            label += f"@{self.k}"
        return label


_ALIASES = {"map": "ap", "mrr": "rr", "p": "p", "precision": "p", "r": "recall"}


def parse_metric(spec: str) -> MetricSpec:
    text = spec.strip().lower()
    k: int | None = None
    if "@" in text:
        text, k_text = text.split("@", 1)
        try:
            k = int(k_text)
        except ValueError:
            raise MathfindError(f"bad metric depth in {spec!r}") from None
        if k < 1:
            raise MathfindError(f"metric depth must be >= 1 in {spec!r}")
    prime = text.endswith("_prime") or text.endswith("'")
    text = text.removesuffix("_prime").removesuffix("'")
    name = _ALIASES.get(text, text)
    if name not in ("p", "recall", "ap", "rr", "ndcg", "dcg", "bpref"):
        raise MathfindError(f"unknown metric {spec!r}")
    if name in ("p", "recall", "dcg") and k is None and name != "recall":
        raise MathfindError(f"metric {spec!r} needs a depth, e.g. {spec}@10")
    return MetricSpec(name, k, prime)


def _topic_value(spec: MetricSpec, items: list[str], graded: dict[str, int], binary: dict[str, int]) -> float:
    if spec.prime:
        items = prime_filter_items(items, set(graded))
    relevant = {item for item, g in binary.items() if g >= 1}
    judged_nonrel = {item for item, g in binary.items() if g < 1}
    depth = spec.k if spec.k is not None else max(len(items), 1)
    if spec.name == "p":
        return precision_at_k(items, relevant, depth)
    if spec.name == "recall":
        return recall_at_k(items, relevant, depth)
    if spec.name == "ap":
        return average_precision(items, relevant)
    if spec.name == "rr":
        return reciprocal_rank(items, relevant)
    if spec.name == "ndcg":
        return ndcg_at_k(items, graded, depth)
    if spec.name == "dcg":
        return dcg_at_k(items, graded, depth)
    if spec.name == "bpref":
        return bpref(items, relevant, judged_nonrel)
    raise AssertionError(spec.name)


_NEEDS_RELEVANT = {"p", "recall", "ap", "rr", "bpref"}


def compute_report(
    run: RunRanking,
    qrels: Qrels,
    metric_specs: list[str],
    scale: GradeScale = GradeScale(),
    visual_map: dict[str, str] | None = None,
) -> list[tuple[str, str, float]]:
    """Rows of (metric, topic, value); aggregate rows use topic ``ALL``."""
    if visual_map is not None:
        run = dedup_visually_distinct(run, visual_map)
    binary_qrels = binarize(qrels, scale)
    topics = sorted(set(run.topics) & set(qrels.topics()))

    rows: list[tuple[str, str, float]] = []
    excluded = 0
    empty_rankings = sum(1 for t in topics if not run.topics.get(t))
    for raw_spec in metric_specs:
        spec = parse_metric(raw_spec)
        per_topic: dict[str, float] = {}
        eligible: dict[str, float] = {}
        for topic in topics:
            items = run.items_for(topic)
            graded = qrels.for_topic(topic)
            binary = binary_qrels.for_topic(topic)
            value = _topic_value(spec, items, graded, binary)
            per_topic[topic] = value
            has_relevant = any(g >= 1 for g in binary.values())
            if spec.name not in _NEEDS_RELEVANT or has_relevant:
                eligible[topic] = value
        for topic in topics:
            rows.append((spec.label, topic, per_topic[topic]))
        mean = sum(eligible.values()) / len(eligible) if eligible else 0.0
        rows.append((spec.label, "ALL", mean))
        excluded = max(excluded, len(per_topic) - len(eligible))
    if excluded:
        rows.append(("excluded_topics", "ALL", float(excluded)))
    if empty_rankings:
        rows.append(("empty_rankings", "ALL", float(empty_rankings)))
    return rows


def write_report(rows: list[tuple[str, str, float]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("metric\ttopic\tvalue\n")
        for metric, topic, value in rows:
            fh.write(f"{metric}\t{topic}\t{value:.12f}\n")
