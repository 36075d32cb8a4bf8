"""Sparse indexing and first-stage retrieval."""

from .build import (
    DocRecord,
    ExtractorConfig,
    FormulaRecord,
    InvertedIndex,
    StoredFormula,
    build_index,
    doc_from_json_line,
    formula_terms,
    make_formula_record,
    read_collection,
)
from .score import (
    Bm25Params,
    Hit,
    bm25plus_search,
    boolean_filter,
    dice_search,
    idf,
    tfidf_search,
)
from .store import load_index, save_index
from .terms import (
    GeneralizedTermSet,
    OptTuple,
    SltTuple,
    dlmf_term_strings,
    opt_leafroot_paths,
    opt_term_strings,
    opt_tuples,
    slt_term_strings,
    slt_tuples,
    term_family,
    text_term_strings,
    tokenize_text,
    wikimirs_term_strings,
    wikimirs_terms,
)

__all__ = [
    "Bm25Params",
    "DocRecord",
    "ExtractorConfig",
    "FormulaRecord",
    "GeneralizedTermSet",
    "Hit",
    "InvertedIndex",
    "OptTuple",
    "SltTuple",
    "StoredFormula",
    "bm25plus_search",
    "boolean_filter",
    "build_index",
    "dice_search",
    "dlmf_term_strings",
    "doc_from_json_line",
    "formula_terms",
    "idf",
    "load_index",
    "make_formula_record",
    "opt_leafroot_paths",
    "opt_term_strings",
    "opt_tuples",
    "read_collection",
    "save_index",
    "slt_term_strings",
    "slt_tuples",
    "term_family",
    "text_term_strings",
    "tfidf_search",
    "tokenize_text",
    "wikimirs_term_strings",
    "wikimirs_terms",
]
