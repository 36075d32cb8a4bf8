"""Canonicalization transforms that reduce representational variation.

All transforms copy their input; trees are never mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass

from .trees import (
    CHILD_ORDER,
    MathSymbol,
    OptNode,
    OptTree,
    SltNode,
    SltTree,
    SpatialRelation,
    SymbolKind,
)

# Alias unification: alternative spellings of one operation.
SLT_ALIASES = {"⋅": "×", "∗": "×", "≺": "<", "≼": "≤"}
OPT_ALIASES = {"×": "times", "⋅": "times", "∗": "times", "≺": "<", "≼": "≤"}

# Inequality flips: rewrite A≥B as B≤A and A>B as B<A.
FLIPS = {"≥": "≤", ">": "<"}

FLATTEN_LABELS = {"+", "times", "="}


@dataclass(frozen=True)
class CanonicalOptions:
    """Independent canonicalization switches; all off is the identity."""

    variable_enum: bool = False
    constant_enum: bool = False
    sort_args: bool = False
    normalize: bool = False
    type_tags: bool = False


def apply_canonical(tree, options: CanonicalOptions):
    """Apply the selected transforms in a fixed order.

    Normalization runs first so later steps see unified labels; type tags
    are assigned before unordered-argument sorting so the collation sees
    tagged tokens.
    """
    if options.normalize:
        tree = normalize_equivalences(tree)
    if options.variable_enum:
        tree = enumerate_variables(tree)
    if options.constant_enum:
        tree = enumerate_constants(tree)
    if options.type_tags:
        tree = tag_types(tree)
    if options.sort_args and isinstance(tree, OptTree):
        tree = sort_unordered_args(tree)
    return tree


# -- label rewrites -------------------------------------------------------


def _relabel(tree, fn):
    """Copy a tree, replacing each symbol via fn(symbol) -> MathSymbol."""
    if isinstance(tree, SltTree):

        def walk(node: SltNode) -> SltNode:
            return SltNode(fn(node.symbol), {rel: walk(c) for rel, c in node.children.items()})

        return SltTree(walk(tree.root))

    def walk_opt(node: OptNode) -> OptNode:
        return OptNode(fn(node.symbol), [walk_opt(c) for c in node.children], node.bracketed)

    return OptTree(walk_opt(tree.root))


def enumerate_variables(tree):
    """Replace each distinct variable with its reading-order index from 1.

    Repeated variables share one index; function identifiers and operation
    names are left alone.
    """
    order: dict[str, str] = {}
    for symbol in _reading_order(tree):
        if symbol.kind == SymbolKind.VARIABLE and symbol.label not in order:
            order[symbol.label] = str(len(order) + 1)

    def rename(sym: MathSymbol) -> MathSymbol:
        if sym.kind == SymbolKind.VARIABLE:
            return MathSymbol(order[sym.label], SymbolKind.VARIABLE)
        return sym

    return _relabel(tree, rename)


def enumerate_constants(tree):
    """Replace every number with the token ``const``."""

    def rename(sym: MathSymbol) -> MathSymbol:
        if sym.kind == SymbolKind.NUMBER:
            return MathSymbol("const", SymbolKind.NUMBER)
        return sym

    return _relabel(tree, rename)


def tag_types(tree):
    """Prefix each label with its symbol-kind code, e.g. ``V!x``."""

    def rename(sym: MathSymbol) -> MathSymbol:
        if sym.label.startswith(f"{sym.kind.value}!"):
            return sym
        return MathSymbol(f"{sym.kind.value}!{sym.label}", sym.kind)

    return _relabel(tree, rename)


def _reading_order(tree):
    for node in tree.nodes():
        yield node.symbol


# -- ordering -------------------------------------------------------------


def linear_tokens(node: OptNode) -> str:
    """Preorder label string used as the collation key for sorting."""
    out: list[str] = []
    stack = [node]
    while stack:
        cur = stack.pop()
        out.append(cur.label)
        stack.extend(reversed(cur.children))
    return " ".join(out)


def sort_unordered_args(opt: OptTree) -> OptTree:
    """Fix the argument order of unordered operators.

    Chains of the same unordered operator are first flattened into one
    n-ary node, then arguments are sorted by the code-point order of each
    subtree's token string. Ordered operators are untouched; the transform
    is idempotent.
    """

    def walk(node: OptNode) -> OptNode:
        children = [walk(c) for c in node.children]
        if node.kind == SymbolKind.OP_UNORDERED and node.label in FLATTEN_LABELS:
            flat: list[OptNode] = []
            for child in children:
                if child.label == node.label and child.kind == SymbolKind.OP_UNORDERED and not child.is_leaf():
                    flat.extend(child.children)
                else:
                    flat.append(child)
            children = flat
        if node.kind == SymbolKind.OP_UNORDERED and children:
            children = sorted(children, key=linear_tokens)
        return OptNode(node.symbol, children, node.bracketed)

    return OptTree(walk(opt.root))


# -- equivalence normalization ---------------------------------------------


def normalize_equivalences(tree):
    """Unify operator aliases and flip ``≥``/``>`` inequalities.

    Rewrites run to a fixpoint. On operator trees the relation node's
    children are reversed; on layout trees an inequality writing line is
    rebuilt with the operand segments swapped (applied when a line holds
    exactly one relation symbol).
    """
    if isinstance(tree, OptTree):
        return OptTree(_normalize_opt(tree.root))
    return SltTree(_normalize_line(tree.root.copy()))


def _normalize_opt(node: OptNode) -> OptNode:
    children = [_normalize_opt(c) for c in node.children]
    label = OPT_ALIASES.get(node.label, node.label)
    if label in FLIPS:
        label = FLIPS[label]
        children = list(reversed(children))
    if label != node.label:
        sym = MathSymbol(label, node.kind)
    else:
        sym = node.symbol
    return OptNode(sym, children, node.bracketed)


def _normalize_line(first: SltNode) -> SltNode:
    # Normalize nested lines and aliases first.
    chain: list[SltNode] = []
    node: SltNode | None = first
    while node is not None:
        nxt = node.children.pop(SpatialRelation.NEXT, None)
        for rel in list(node.children):
            node.children[rel] = _normalize_line(node.children[rel])
        if node.label in SLT_ALIASES:
            node.symbol = MathSymbol(SLT_ALIASES[node.label], node.kind)
        chain.append(node)
        node = nxt

    relations = [i for i, n in enumerate(chain) if n.label in ("≥", ">", "≤", "<", "=", "≺", "≼")]
    flippable = [i for i in relations if chain[i].label in FLIPS]
    if len(relations) == 1 and flippable:
        i = flippable[0]
        rel_node = chain[i]
        rel_node.symbol = MathSymbol(FLIPS[rel_node.label], rel_node.kind)
        chain = chain[i + 1:] + [rel_node] + chain[:i]

    for prev, cur in zip(chain, chain[1:]):
        prev.children[SpatialRelation.NEXT] = cur
    return chain[0]
