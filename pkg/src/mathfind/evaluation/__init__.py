"""Retrieval and question-answering evaluation."""

from .answers import (
    accuracy,
    answers_match,
    edit_distance,
    exact_match,
    normalized_edit_distance,
    perplexity,
    token_f1,
)
from .files import GradeScale, Qrels, RunRanking, binarize, parse_qrels, parse_run, write_run
from .protocol import (
    dedup_visually_distinct,
    dedup_visually_distinct_items,
    prime_filter,
    prime_filter_items,
)
from .rank_metrics import (
    average_precision,
    bpref,
    dcg_at_k,
    idcg_at_k,
    mean_over_topics,
    ndcg_at_k,
    precision_at_k,
    recall,
    recall_at_k,
    reciprocal_rank,
)
from .report import MetricSpec, compute_report, parse_metric, write_report

__all__ = [
    "GradeScale",
    "MetricSpec",
    "Qrels",
    "RunRanking",
    "accuracy",
    "answers_match",
    "average_precision",
    "binarize",
    "bpref",
    "compute_report",
    "dcg_at_k",
    "dedup_visually_distinct",
    "dedup_visually_distinct_items",
    "edit_distance",
    "exact_match",
    "idcg_at_k",
    "mean_over_topics",
    "ndcg_at_k",
    "normalized_edit_distance",
    "parse_metric",
    "parse_qrels",
    "parse_run",
    "perplexity",
    "precision_at_k",
    "prime_filter",
    "prime_filter_items",
    "recall",
    "recall_at_k",
    "reciprocal_rank",
    "token_f1",
    "write_report",
    "write_run",
]
