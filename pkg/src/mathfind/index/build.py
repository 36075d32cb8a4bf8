"""Collection ingestion and inverted index construction.

The index is finalized deterministically: documents are ordered by id and
vocabulary terms lexicographically, so two builds from arbitrarily
partitioned or permuted document streams serialize byte-identically.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, asdict
from typing import Iterable

from ..errors import DuplicateDocId, ParseError, TranslateError, UnknownTerm
from ..formula.linearize import visual_id
from ..formula.parser import parse_latex
from ..formula.translate import slt_to_opt
from ..formula.trees import OptTree, SltTree
from .terms import (
    dlmf_term_strings,
    opt_term_strings,
    slt_term_strings,
    term_family,
    text_term_strings,
    wikimirs_term_strings,
)


@dataclass(frozen=True)
class ExtractorConfig:
    """Which term families the index stores, and their knobs."""

    slt_tuples: bool = True
    slt_window: int = 1
    opt_paths: bool = True
    opt_enumerate: bool = True
    wikimirs: bool = True
    dlmf: bool = True
    text: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, raw: str) -> "ExtractorConfig":
        return cls(**json.loads(raw))


@dataclass
class FormulaRecord:
    formula_id: str
    latex: str
    slt: SltTree | None
    opt: OptTree | None
    visual_id: str


@dataclass
class DocRecord:
    doc_id: str
    text: str
    formulas: list[FormulaRecord] = field(default_factory=list)


def make_formula_record(formula_id: str, latex: str) -> FormulaRecord:
    """Parse one formula; unparseable input keeps the raw string as its id."""
    try:
        slt = parse_latex(latex)
    except ParseError:
        return FormulaRecord(formula_id, latex, None, None, latex)
    try:
        opt = slt_to_opt(slt)
    except TranslateError:
        opt = None
    return FormulaRecord(formula_id, latex, slt, opt, visual_id(slt))


def doc_from_json_line(line: str) -> DocRecord:
    obj = json.loads(line)
    formulas = [
        make_formula_record(f"f{i}", latex)
        for i, latex in enumerate(obj.get("formulas", []))
    ]
    return DocRecord(str(obj["id"]), obj.get("text", ""), formulas)


def read_collection(path) -> Iterable[DocRecord]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield doc_from_json_line(line)


def formula_terms(record: FormulaRecord, config: ExtractorConfig) -> Counter[str]:
    """All index terms for one formula under the configured families."""
    terms: Counter[str] = Counter()
    if record.slt is not None:
        if config.slt_tuples:
            terms.update(slt_term_strings(record.slt, config.slt_window))
        if config.dlmf:
            terms.update(dlmf_term_strings(record.slt))
    if record.opt is not None:
        if config.opt_paths:
            terms.update(opt_term_strings(record.opt, config.opt_enumerate))
        if config.wikimirs:
            terms.update(wikimirs_term_strings(record.opt))
    return terms


@dataclass
class StoredFormula:
    formula_id: str
    latex: str
    visual_id: str
    family_totals: dict[str, int]


class InvertedIndex:
    """Immutable term -> posting-list index over documents and formulas.

    Postings are ``(doc_index, formula_index, term_frequency)`` sorted
    ascending, with ``formula_index = -1`` for document-level text terms.
    """

    def __init__(self):
        self.doc_ids: list[str] = []
        self.doc_text: list[str] = []
        self.doc_len: list[int] = []
        self.doc_formulas: list[list[StoredFormula]] = []
        self.terms: list[str] = []
        self.vocab: dict[str, int] = {}
        self.postings: list[list[tuple[int, int, int]]] = []
        self.doc_freq: list[int] = []
        self.config = ExtractorConfig()

    # -- stats --------------------------------------------------------------

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def avg_doc_len(self) -> float:
        return sum(self.doc_len) / len(self.doc_len) if self.doc_len else 0.0

    def doc_index(self, doc_id: str) -> int:
        return self._doc_pos[doc_id]

    def term_id(self, term: str) -> int:
        try:
            return self.vocab[term]
        except KeyError:
            raise UnknownTerm(term) from None

    def document_frequency(self, term: str) -> int:
        return self.doc_freq[self.term_id(term)]

    def postings_for(self, term: str) -> list[tuple[int, int, int]]:
        return self.postings[self.term_id(term)]

    def formula(self, doc_id: str, formula_id: str) -> StoredFormula:
        idx = self.doc_index(doc_id)
        for stored in self.doc_formulas[idx]:
            if stored.formula_id == formula_id:
                return stored
        raise KeyError(f"{doc_id}/{formula_id}")

    def family_total(self, doc_idx: int, form_idx: int, families: set[str]) -> int:
        if form_idx < 0:
            return self.doc_len[doc_idx] if "txt" in families else 0
        totals = self.doc_formulas[doc_idx][form_idx].family_totals
        return sum(totals.get(f, 0) for f in families)

    def finalize(self) -> None:
        self._doc_pos = {doc_id: i for i, doc_id in enumerate(self.doc_ids)}


def build_index(docs: Iterable[DocRecord], config: ExtractorConfig | None = None) -> InvertedIndex:
    """Build a deterministic index from a document stream."""
    config = config or ExtractorConfig()
    by_id: dict[str, DocRecord] = {}
    for doc in docs:
        if doc.doc_id in by_id:
            raise DuplicateDocId(doc.doc_id)
        by_id[doc.doc_id] = doc

    index = InvertedIndex()
    index.config = config
    index.doc_ids = sorted(by_id)

    raw_postings: dict[str, list[tuple[int, int, int]]] = {}
    for doc_idx, doc_id in enumerate(index.doc_ids):
        doc = by_id[doc_id]
        seen_formula_ids = set()
        stored_formulas: list[StoredFormula] = []
        text_terms = text_term_strings(doc.text) if config.text else Counter()
        index.doc_text.append(doc.text)
        index.doc_len.append(sum(text_terms.values()))
        for term, tf in text_terms.items():
            raw_postings.setdefault(term, []).append((doc_idx, -1, tf))
        for form_idx, record in enumerate(doc.formulas):
            if record.formula_id in seen_formula_ids:
                raise DuplicateDocId(f"{doc_id}/{record.formula_id}")
            seen_formula_ids.add(record.formula_id)
            terms = formula_terms(record, config)
            totals: Counter[str] = Counter()
            for term, tf in terms.items():
                raw_postings.setdefault(term, []).append((doc_idx, form_idx, tf))
                totals[term_family(term)] += tf
            stored_formulas.append(
                StoredFormula(record.formula_id, record.latex, record.visual_id, dict(totals))
            )
        index.doc_formulas.append(stored_formulas)

    index.terms = sorted(raw_postings)
    index.vocab = {term: tid for tid, term in enumerate(index.terms)}
    for term in index.terms:
        plist = sorted(raw_postings[term])
        index.postings.append(plist)
        index.doc_freq.append(len({doc for doc, _, _ in plist}))
    index.finalize()
    return index
