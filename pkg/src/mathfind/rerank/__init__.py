"""Full-tree matching for candidate re-ranking."""

from .align import AlignmentScore, mss_score
from .edits import (
    EditCosts,
    PlainTree,
    as_plain,
    combined_ted_score,
    sim_inverse,
    sim_normalized,
    tree_edit_distance,
    tree_size,
)
from .subtrees import approach0_rerank, common_subtree_pairs

__all__ = [
    "AlignmentScore",
    "EditCosts",
    "PlainTree",
    "approach0_rerank",
    "as_plain",
    "combined_ted_score",
    "common_subtree_pairs",
    "mss_score",
    "sim_inverse",
    "sim_normalized",
    "tree_edit_distance",
    "tree_size",
]
