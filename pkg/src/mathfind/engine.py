"""Search orchestration: engines, re-rankers, and fusion over one index.

A query string may mix text with ``$...$`` formula segments; engines that
take a formula use the first segment (or the whole string when no ``$``
is present), text engines use the remaining words. Formula engines rank
(document, formula) pairs; text engines and fusion rank documents.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MathfindError, ParseError, TranslateError
from .formula.canonical import enumerate_variables
from .formula.parser import parse_latex
from .formula.translate import slt_to_opt
from .formula.trees import OptTree, SltTree
from .fusion import Ranking, borda, interleave, linear_combine, minmax_normalize, rrf
from .index.build import ExtractorConfig, InvertedIndex
from .index.score import (
    Bm25Params,
    Hit,
    bm25plus_search,
    boolean_filter,
    dice_search,
    tfidf_search,
)
from .index.store import load_index, save_index
from .index.terms import (
    dlmf_term_strings,
    opt_term_strings,
    slt_term_strings,
    text_term_strings,
    tokenize_text,
    wikimirs_term_strings,
)
from .phoc.encode import PhocVector, phoc_encode
from .phoc.layout import layout_symbols
from .phoc.search import PhocStore, autocomplete, load_phoc, phoc_search, save_phoc
from .rerank.align import mss_score
from .rerank.edits import sim_inverse
from .rerank.subtrees import approach0_rerank

FORMULA_ENGINES = ("slt", "opt", "wikimirs", "phoc")
DOC_ENGINES = ("dlmf-text", "bm25-text")
ENGINES = FORMULA_ENGINES + DOC_ENGINES + ("fused",)
RERANKERS = ("none", "ted-slt", "ted-opt", "ted-combined", "mss", "approach0")
FUSERS = ("linear", "rrf", "borda", "interleave")

_MATH_SEGMENT = re.compile(r"\$([^$]+)\$")


@dataclass(frozen=True)
class EngineSpec:
    engine: str = "slt"
    rerank: str = "none"
    fusion: str = "rrf"
    components: tuple[str, ...] = ()
    weights: tuple[float, ...] = ()
    k: int = 10
    require_text: bool = False

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise MathfindError(f"unknown engine {self.engine!r}")
        if self.rerank not in RERANKERS:
            raise MathfindError(f"unknown reranker {self.rerank!r}")
        if self.k < 1:
            raise MathfindError("k must be >= 1")
        if self.engine == "fused":
            if self.fusion not in FUSERS:
                raise MathfindError(f"unknown fusion {self.fusion!r}")
            if len(self.components) < 2:
                raise MathfindError("fused engine requires at least 2 components")
            for component in self.components:
                if component not in FORMULA_ENGINES + DOC_ENGINES:
                    raise MathfindError(f"unknown fusion component {component!r}")
            if self.fusion == "linear" and self.weights and len(self.weights) != len(self.components):
                raise MathfindError("weights must pair with components")

    @property
    def doc_level(self) -> bool:
        """Whether this spec ranks documents rather than single formulas."""
        return self.engine in DOC_ENGINES or self.engine == "fused"

    def tag(self) -> str:
        payload = json.dumps(
            {
                "engine": self.engine,
                "rerank": self.rerank,
                "fusion": self.fusion if self.engine == "fused" else None,
                "components": list(self.components),
                "weights": list(self.weights),
                "k": self.k,
                "require_text": self.require_text,
            },
            sort_keys=True,
        )
        digest = hashlib.sha1(payload.encode()).hexdigest()[:8]
        name = self.engine if self.engine != "fused" else f"fused-{self.fusion}"
        return f"{name}-{digest}"


@dataclass
class Query:
    """A raw query split into its formula and text parts."""

    raw: str
    formula: str | None
    text: str

    @classmethod
    def parse(cls, raw: str) -> "Query":
        segments = _MATH_SEGMENT.findall(raw)
        text = _MATH_SEGMENT.sub(" ", raw).strip()
        formula = segments[0] if segments else None
        return cls(raw, formula, text)

    def formula_or_raw(self) -> str:
        return self.formula if self.formula is not None else self.raw

    def text_or_raw(self) -> str:
        return self.text if (self.text or self.formula is not None) else self.raw


@dataclass
class QueryTrees:
    slt: SltTree | None = None
    opt: OptTree | None = None


class SearchEngine:
    def __init__(self, index: InvertedIndex, phoc_store: PhocStore):
        self.index = index
        self.phoc_store = phoc_store

    @classmethod
    def load(cls, directory: str | Path) -> "SearchEngine":
        directory = Path(directory)
        index = load_index(directory)
        phoc_store = load_phoc(directory / "phoc.bin")
        return cls(index, phoc_store)

    # -- query preparation ----------------------------------------------------

    def _trees(self, query: Query) -> QueryTrees:
        trees = QueryTrees()
        source = query.formula_or_raw()
        try:
            trees.slt = parse_latex(source)
        except ParseError:
            return trees
        try:
            trees.opt = slt_to_opt(trees.slt)
        except TranslateError:
            pass
        return trees

    # -- single engines ---------------------------------------------------------

    def search_engine(self, query: Query, engine: str, k: int) -> list[Hit]:
        config = self.index.config
        trees = self._trees(query) if engine in FORMULA_ENGINES or engine == "dlmf-text" else QueryTrees()
        if engine == "slt":
            if trees.slt is None:
                return []
            return dice_search(slt_term_strings(trees.slt, config.slt_window), self.index, k)
        if engine == "opt":
            if trees.opt is None:
                return []
            return dice_search(opt_term_strings(trees.opt, config.opt_enumerate), self.index, k)
        if engine == "wikimirs":
            if trees.opt is None:
                return []
            terms = wikimirs_term_strings(trees.opt)
            return tfidf_search(terms, self.index, k, term_weight=_wikimirs_weight)
        if engine == "dlmf-text":
            terms = text_term_strings(query.text_or_raw())
            if trees.slt is not None:
                terms.update(dlmf_term_strings(trees.slt))
            if not terms:
                return []
            return tfidf_search(terms, self.index, k, granularity="doc")
        if engine == "bm25-text":
            words = tokenize_text(query.text_or_raw())
            if not words:
                return []
            return bm25plus_search(words, self.index, k, Bm25Params())
        if engine == "phoc":
            if trees.slt is None:
                return []
            vector = phoc_encode(layout_symbols(trees.slt), self.phoc_store.scheme)
            hits = phoc_search(vector, self.phoc_store, k)
            return [Hit(h.doc_id, h.formula_id, h.score) for h in hits]
        raise MathfindError(f"unknown engine {engine!r}")

    # -- rerank ---------------------------------------------------------------

    def rerank_hits(self, query: Query, hits: list[Hit], method: str) -> list[Hit]:
        if method == "none" or not hits:
            return hits
        trees = self._trees(query)
        if trees.slt is None:
            return hits
        keyed: list[tuple[tuple, Hit]] = []
        for hit in hits:
            if hit.formula_id is None:
                keyed.append(((-hit.score,), hit))
                continue
            stored = self.index.formula(hit.doc_id, hit.formula_id)
            cand_trees = _candidate_trees(stored.latex)
            score_key, new_score = self._rerank_score(method, trees, cand_trees)
            keyed.append((score_key, Hit(hit.doc_id, hit.formula_id, new_score, hit.matched_terms)))
        keyed.sort(key=lambda pair: (pair[0], pair[1].doc_id, pair[1].formula_id or ""))
        return [hit for _, hit in keyed]

    def _rerank_score(self, method: str, query: QueryTrees, cand: QueryTrees) -> tuple[tuple, float]:
        if method == "ted-slt":
            score = sim_inverse(query.slt, cand.slt) if cand.slt else 0.0
            return (-score,), score
        if method == "ted-opt":
            score = sim_inverse(query.opt, cand.opt) if (query.opt and cand.opt) else 0.0
            return (-score,), score
        if method == "ted-combined":
            slt_part = sim_inverse(query.slt, cand.slt) if cand.slt else 0.0
            opt_part = sim_inverse(query.opt, cand.opt) if (query.opt and cand.opt) else 0.0
            score = 0.5 * slt_part + 0.5 * opt_part
            return (-score,), score
        if method == "mss":
            if cand.slt is None:
                return ((0.0, 0.0, 0.0),), 0.0
            alignment = mss_score(query.slt, cand.slt)
            return (
                (-alignment.mss, -alignment.tiebreak_precision_unified, -alignment.tiebreak_recall_raw),
                alignment.mss,
            )
        if method == "approach0":
            score = approach0_rerank(query.opt, cand.opt) if (query.opt and cand.opt) else 0.0
            return (-score,), score
        raise MathfindError(f"unknown reranker {method!r}")

    # -- full pipeline -----------------------------------------------------------

    def search(self, raw_query: str, spec: EngineSpec) -> list[Hit]:
        query = Query.parse(raw_query)
        if spec.engine == "fused":
            hits = self._search_fused(query, spec)
        else:
            hits = self.search_engine(query, spec.engine, spec.k)
            hits = self.rerank_hits(query, hits, spec.rerank)
        if spec.require_text:
            words = tokenize_text(query.text_or_raw())
            text_hits = bm25plus_search(words, self.index, max(spec.k, 1000)) if words else []
            hits = boolean_filter(hits, text_hits)
        return hits[: spec.k]

    def _search_fused(self, query: Query, spec: EngineSpec) -> list[Hit]:
        rankings: list[Ranking] = []
        best_formula: dict[str, tuple[str, float]] = {}
        for component in spec.components:
            hits = self.search_engine(query, component, spec.k)
            doc_scores: dict[str, float] = {}
            for hit in hits:
                if hit.score > doc_scores.get(hit.doc_id, float("-inf")):
                    doc_scores[hit.doc_id] = hit.score
                if hit.formula_id is not None:
                    current = best_formula.get(hit.doc_id)
                    if current is None or hit.score > current[1]:
                        best_formula[hit.doc_id] = (hit.formula_id, hit.score)
            if doc_scores:
                rankings.append(minmax_normalize(Ranking.from_pairs(doc_scores.items(), component)))
            else:
                rankings.append(Ranking((), component))
        if spec.fusion == "linear":
            weights = spec.weights or tuple(1.0 / len(rankings) for _ in rankings)
            fused = linear_combine(list(zip(weights, rankings)))
        elif spec.fusion == "rrf":
            fused = rrf(rankings)
        elif spec.fusion == "borda":
            fused = borda(rankings)
        else:
            fused = interleave(rankings)
        out = []
        for doc_id, score in fused.items:
            formula = best_formula.get(doc_id)
            out.append(Hit(doc_id, formula[0] if formula else None, score))
        return out


def _wikimirs_weight(term: str) -> float:
    return 0.5 if term.startswith("wm:g:") else 1.0


def _candidate_trees(latex: str) -> QueryTrees:
    trees = QueryTrees()
    try:
        trees.slt = parse_latex(latex)
    except ParseError:
        return trees
    try:
        trees.opt = slt_to_opt(trees.slt)
    except TranslateError:
        pass
    return trees


def run_item_id(hit: Hit, doc_level: bool = False) -> str:
    """TREC item token: the doc id for document rankings, else
    ``doc#formula`` (a retained formula on a doc-level hit is display
    metadata, not identity)."""
    if doc_level or hit.formula_id is None:
        return hit.doc_id
    return f"{hit.doc_id}#{hit.formula_id}"


def build_stores(docs, config: ExtractorConfig | None = None):
    """Build the inverted index and the spatial store from one pass."""
    from .index.build import build_index

    doc_list = list(docs)
    index = build_index(doc_list, config)
    store = PhocStore()
    for doc in doc_list:
        for record in doc.formulas:
            if record.slt is not None:
                store.add(doc.doc_id, record.formula_id, record.slt)
    store.finalize()
    return index, store


def save_stores(index: InvertedIndex, store: PhocStore, directory: str | Path) -> None:
    directory = Path(directory)
    save_index(index, directory)
    save_phoc(store, directory / "phoc.bin")
