"""Formula representations: layout trees, operator trees, canonicalization."""

from .canonical import (
    CanonicalOptions,
    apply_canonical,
    enumerate_constants,
    enumerate_variables,
    normalize_equivalences,
    sort_unordered_args,
    tag_types,
)
from .linearize import linearize_dlmf, slt_to_latex, visual_id, visual_id_of_latex
from .parser import parse_latex
from .translate import slt_to_opt, slt_to_opt_with_stats
from .trees import (
    MathSymbol,
    OptNode,
    OptTree,
    SltNode,
    SltTree,
    SpatialRelation,
    SymbolKind,
)

__all__ = [
    "CanonicalOptions",
    "MathSymbol",
    "OptNode",
    "OptTree",
    "SltNode",
    "SltTree",
    "SpatialRelation",
    "SymbolKind",
    "apply_canonical",
    "enumerate_constants",
    "enumerate_variables",
    "linearize_dlmf",
    "normalize_equivalences",
    "parse_latex",
    "slt_to_latex",
    "slt_to_opt",
    "slt_to_opt_with_stats",
    "sort_unordered_args",
    "tag_types",
    "visual_id",
    "visual_id_of_latex",
]
