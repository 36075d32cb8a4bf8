"""Symbolic word-problem solving."""

from .evaltree import (
    ANSWER_VARIABLE,
    NumberBinding,
    TraversalMode,
    eval_traversal,
    evaluate_opt,
    is_equation_tree,
    make_equation_tree,
    to_args_first,
    to_ops_first,
)
from .linear import solve_equation, solve_linear
from .states import VERB_LEXICON, VerbCategory, WorldState, aris_solve
from .substitute import rebind, substitute_numbers

__all__ = [
    "ANSWER_VARIABLE",
    "NumberBinding",
    "TraversalMode",
    "VERB_LEXICON",
    "VerbCategory",
    "WorldState",
    "aris_solve",
    "eval_traversal",
    "evaluate_opt",
    "is_equation_tree",
    "make_equation_tree",
    "rebind",
    "solve_equation",
    "solve_linear",
    "substitute_numbers",
    "to_args_first",
    "to_ops_first",
]
