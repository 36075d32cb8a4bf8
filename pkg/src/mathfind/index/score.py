"""First-stage sparse retrieval scoring.

All searches share the global tie-break rule: descending score, then
ascending (doc id, formula id).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from ..errors import EmptyQuery, UnknownTerm
from .build import InvertedIndex
from .terms import term_family


@dataclass(frozen=True)
class Hit:
    doc_id: str
    formula_id: str | None
    score: float
    matched_terms: tuple[str, ...] = ()

    @property
    def key(self) -> tuple[str, str]:
        return (self.doc_id, self.formula_id or "")


def _ranked(hits: list[Hit], k: int) -> list[Hit]:
    hits.sort(key=lambda h: (-h.score, h.doc_id, h.formula_id or ""))
    return hits[:k]


def idf(term: str, index: InvertedIndex) -> float:
    """log(N / n_t) with the natural logarithm."""
    n_t = index.document_frequency(term)
    return math.log(index.n_docs / n_t)


def dice_search(query_terms: Counter[str] | dict[str, int], index: InvertedIndex, k: int) -> list[Hit]:
    """Multiset dice-coefficient search over formula terms.

    score(f) = 2 |Q ∩ F| / (|Q| + |F|), where F is the candidate's stored
    term multiset for the query's term families.
    """
    query = Counter(query_terms)
    if not +query:
        raise EmptyQuery("dice_search needs at least one query term")
    families = {term_family(t) for t in query}
    q_size = sum(query.values())

    overlap: dict[tuple[int, int], int] = {}
    matched: dict[tuple[int, int], list[str]] = {}
    for term, q_tf in query.items():
        if term not in index.vocab:
            continue
        for doc_idx, form_idx, tf in index.postings_for(term):
            key = (doc_idx, form_idx)
            overlap[key] = overlap.get(key, 0) + min(q_tf, tf)
            matched.setdefault(key, []).append(term)

    hits = []
    for (doc_idx, form_idx), inter in overlap.items():
        f_size = index.family_total(doc_idx, form_idx, families)
        if f_size == 0:
            continue
        score = 2.0 * inter / (q_size + f_size)
        doc_id = index.doc_ids[doc_idx]
        formula_id = None if form_idx < 0 else index.doc_formulas[doc_idx][form_idx].formula_id
        hits.append(Hit(doc_id, formula_id, score, tuple(sorted(matched[(doc_idx, form_idx)]))))
    return _ranked(hits, k)


def tfidf_search(
    query_terms: Counter[str] | dict[str, int],
    index: InvertedIndex,
    k: int,
    granularity: str = "formula",
    term_weight=None,
) -> list[Hit]:
    """TF-IDF scoring: sum over query terms of q_tf · tf · idf(t).

    ``granularity="doc"`` folds formula-level postings into their document,
    which is how a unified text+formula token index is searched.
    ``term_weight`` lets callers discount term classes (e.g. generalized
    wildcard terms at half weight).
    """
    query = Counter(query_terms)
    if not +query:
        raise EmptyQuery("tfidf_search needs at least one query term")

    scores: dict[tuple[int, int], float] = {}
    matched: dict[tuple[int, int], set[str]] = {}
    for term, q_tf in query.items():
        if term not in index.vocab:
            continue
        weight = term_weight(term) if term_weight else 1.0
        if weight == 0.0:
            continue
        w_idf = idf(term, index)
        for doc_idx, form_idx, tf in index.postings_for(term):
            key = (doc_idx, -1) if granularity == "doc" else (doc_idx, form_idx)
            scores[key] = scores.get(key, 0.0) + weight * q_tf * tf * w_idf
            matched.setdefault(key, set()).add(term)

    hits = []
    for (doc_idx, form_idx), score in scores.items():
        if score <= 0.0:
            continue
        doc_id = index.doc_ids[doc_idx]
        formula_id = None if form_idx < 0 else index.doc_formulas[doc_idx][form_idx].formula_id
        hits.append(Hit(doc_id, formula_id, score, tuple(sorted(matched[(doc_idx, form_idx)]))))
    return _ranked(hits, k)


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75
    delta: float = 1.0

    def __post_init__(self):
        if self.k1 <= 0 or self.b <= 0 or self.delta <= 0:
            raise ValueError("BM25+ parameters must be positive")


def bm25plus_search(
    query_words: list[str] | Counter[str],
    index: InvertedIndex,
    k: int,
    params: Bm25Params = Bm25Params(),
) -> list[Hit]:
    """BM25+ over document text terms.

    score(d) = Σ_t idf(t) · ((k1+1)·tf / (k1·(1−b+b·len/avglen) + tf) + δ)
    """
    if isinstance(query_words, Counter):
        query = Counter({f"txt:{w}" if not w.startswith("txt:") else w: c for w, c in query_words.items()})
    else:
        query = Counter(f"txt:{w}" if not w.startswith("txt:") else w for w in query_words)
    if not +query:
        raise EmptyQuery("bm25plus_search needs at least one query word")

    avglen = index.avg_doc_len
    scores: dict[int, float] = {}
    matched: dict[int, set[str]] = {}
    for term, q_tf in query.items():
        if term not in index.vocab:
            continue
        w_idf = idf(term, index)
        for doc_idx, form_idx, tf in index.postings_for(term):
            if form_idx >= 0:
                continue
            length_norm = params.k1 * (1 - params.b + params.b * index.doc_len[doc_idx] / avglen)
            part = (params.k1 + 1) * tf / (length_norm + tf) + params.delta
            scores[doc_idx] = scores.get(doc_idx, 0.0) + q_tf * w_idf * part
            matched.setdefault(doc_idx, set()).add(term)

    hits = [
        Hit(index.doc_ids[doc_idx], None, score, tuple(sorted(matched[doc_idx])))
        for doc_idx, score in scores.items()
        if score > 0.0
    ]
    return _ranked(hits, k)


def boolean_filter(formula_hits: list[Hit], text_hits: list[Hit]) -> list[Hit]:
    """Keep formula hits whose document also has a text match.

    The surviving hits keep their original relative order; this is the
    conjunctive formula-AND-text constraint.
    """
    text_docs = {hit.doc_id for hit in text_hits}
    return [hit for hit in formula_hits if hit.doc_id in text_docs]
