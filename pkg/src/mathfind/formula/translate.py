"""Translation of symbol layout trees into operator trees.

Each writing line is resolved with standard precedence: equality and
relational operators bind loosest, then addition/subtraction, then
multiplication (explicit or implicit), with scripts and function
application handled structurally. Fraction bars become ``divide`` nodes,
subscripts become ``sub`` nodes, superscripts ``sup`` nodes, and adjacent
operands multiply through an inserted ``times`` node. All multiplicative
spellings (``×``, ``⋅``, ``∗``, adjacency) produce the single operation
label ``times``. Redundant grouping parentheses are removed; the
subexpression root keeps a ``bracketed`` flag so index term generators can
reconstruct the written form.

Chains of the same unordered operator (``+``, ``times``, ``=``) written
without parentheses are kept as one n-ary node.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import TranslateError
from .parser import BIG_OPERATORS
from .trees import (
    MathSymbol,
    OptNode,
    OptTree,
    SltNode,
    SltTree,
    SpatialRelation,
    SymbolKind,
)

RELATION_LABELS = {"=", "<", ">", "≤", "≥", "≺", "≼"}
ADDITIVE_LABELS = {"+", "-"}
MULTIPLICATIVE_LABELS = {"×", "⋅", "∗"}
FLATTEN_LABELS = {"+", "times", "="}

_LEVEL_RELATION = 1
_LEVEL_ADDITIVE = 2
_LEVEL_MULTIPLICATIVE = 3


@dataclass
class TranslateStats:
    """Counts of operator nodes materialized without an SLT symbol."""

    inserted: int = 0


@dataclass
class _OpTok:
    label: str
    level: int


def _opt_op(label: str, children: list[OptNode], unordered: bool) -> OptNode:
    kind = SymbolKind.OP_UNORDERED if unordered else SymbolKind.OP_ORDERED
    return OptNode(MathSymbol(label, kind), children)


def _opt_fn(label: str, children: list[OptNode]) -> OptNode:
    return OptNode(MathSymbol(label, SymbolKind.FUNCTION), children)


class _Translator:
    def __init__(self):
        self.stats = TranslateStats()

    def line_expr(self, first: SltNode | None) -> OptNode:
        if first is None:
            raise TranslateError("empty writing line")
        items = self.collect_items(first)
        items = self.resolve_functions(items)
        return self.parse_items(items)

    def collect_items(self, first: SltNode) -> list:
        items: list = []
        node: SltNode | None = first
        while node is not None:
            if node.kind in (SymbolKind.OP_ORDERED, SymbolKind.OP_UNORDERED) and node.label != "frac":
                if any(rel != SpatialRelation.NEXT for rel in node.children):
                    raise TranslateError(f"scripts on operator {node.label!r} have no operator mapping")
                items.append(_OpTok(node.label, _op_level(node.label)))
            else:
                items.append(self.atom_expr(node))
            node = node.children.get(SpatialRelation.NEXT)
        return items

    def atom_expr(self, node: SltNode) -> OptNode:
        label, kind = node.label, node.kind
        if kind == SymbolKind.FUNCTION and label in BIG_OPERATORS.values():
            limits = []
            for rel in (SpatialRelation.BELOW, SpatialRelation.ABOVE):
                if rel in node.children:
                    limits.append(self.line_expr(node.children[rel]))
            return _BigOp(label, limits)  # resolved against its body later
        if label == "frac":
            num = self.line_expr(node.children.get(SpatialRelation.ABOVE))
            den = self.line_expr(node.children.get(SpatialRelation.BELOW))
            expr = _opt_op("divide", [num, den], unordered=False)
        elif label == "sqrt":
            expr = _opt_fn("sqrt", [self.line_expr(node.children.get(SpatialRelation.INSIDE))])
        elif kind == SymbolKind.CONTAINER:
            expr = self.line_expr(node.children.get(SpatialRelation.INSIDE))
            expr.bracketed = True
        elif kind == SymbolKind.FUNCTION:
            expr = OptNode(MathSymbol(label, SymbolKind.FUNCTION))
        elif kind in (SymbolKind.VARIABLE, SymbolKind.NUMBER, SymbolKind.WILDCARD):
            expr = OptNode(MathSymbol(label, kind))
        else:
            raise TranslateError(f"symbol {label!r} has no operator mapping")
        return self.wrap_scripts(node, expr)

    def wrap_scripts(self, node: SltNode, expr: OptNode) -> OptNode:
        for rel, op_label in (
            (SpatialRelation.SUB, "sub"),
            (SpatialRelation.SUP, "sup"),
        ):
            if rel in node.children:
                script = self.line_expr(node.children[rel])
                expr = _opt_op(op_label, [expr, script], unordered=False)
                self.stats.inserted += 1
        for rel, op_label in (
            (SpatialRelation.PRESUB, "presub"),
            (SpatialRelation.PRESUP, "presup"),
        ):
            if rel in node.children:
                script = self.line_expr(node.children[rel])
                expr = _opt_fn(op_label, [expr, script])
                self.stats.inserted += 1
        return expr

    def resolve_functions(self, items: list) -> list:
        """Bind function names and big operators to their arguments."""
        out: list = []
        i = 0
        while i < len(items):
            item = items[i]
            if isinstance(item, _BigOp):
                body_items: list = []
                j = i + 1
                while j < len(items):
                    nxt = items[j]
                    if isinstance(nxt, _OpTok) and nxt.level <= _LEVEL_ADDITIVE:
                        break
                    body_items.append(nxt)
                    j += 1
                children = list(item.limits)
                if body_items:
                    children.append(self.parse_items(self.resolve_functions(body_items)))
                if not children:
                    raise TranslateError(f"{item.label} has neither limits nor body")
                out.append(_opt_fn(item.label, children))
                i = j
                continue
            if isinstance(item, OptNode) and item.kind == SymbolKind.FUNCTION and item.is_leaf():
                if i + 1 >= len(items) or isinstance(items[i + 1], _OpTok):
                    raise TranslateError(f"function {item.label!r} without argument")
                arg = items[i + 1]
                if isinstance(arg, _BigOp):
                    raise TranslateError(f"function {item.label!r} applied to a bare operator")
                arg.bracketed = False  # application parens, not grouping
                self.stats.inserted += 1
                out.append(_opt_fn("apply", [item, arg]))
                i += 2
                continue
            out.append(item)
            i += 1
        return out

    def parse_items(self, items: list) -> OptNode:
        self._items = items
        self._pos = 0
        expr = self.parse_binary(_LEVEL_RELATION)
        if self._pos < len(items):
            raise TranslateError("misplaced operator")
        return expr

    def parse_binary(self, min_level: int) -> OptNode:
        left = self.parse_operand()
        while self._pos < len(self._items):
            item = self._items[self._pos]
            if isinstance(item, _OpTok):
                level, label = item.level, item.label
                implicit = False
            else:
                level, label = _LEVEL_MULTIPLICATIVE, "times"
                implicit = True
            if level < min_level:
                break
            if not implicit:
                self._pos += 1
            else:
                self.stats.inserted += 1
            right = self.parse_binary(level + 1)
            left = self.combine(label, left, right)
        return left

    def parse_operand(self) -> OptNode:
        if self._pos >= len(self._items):
            raise TranslateError("dangling operator")
        item = self._items[self._pos]
        if isinstance(item, _OpTok):
            if item.label == "-":
                self._pos += 1
                self.stats.inserted += 1
                return _opt_fn("neg", [self.parse_operand()])
            raise TranslateError(f"misplaced operator {item.label!r}")
        self._pos += 1
        return item

    def combine(self, label: str, left: OptNode, right: OptNode) -> OptNode:
        if label in MULTIPLICATIVE_LABELS or label == "times":
            op_label, unordered = "times", True
        elif label == "+":
            op_label, unordered = "+", True
        elif label == "=":
            op_label, unordered = "=", True
        elif label == "-":
            op_label, unordered = "-", False
        else:
            op_label, unordered = label, False
        if (
            op_label in FLATTEN_LABELS
            and left.label == op_label
            and not left.is_leaf()
            and not left.bracketed
        ):
            left.children.append(right)
            return left
        return _opt_op(op_label, [left, right], unordered)


@dataclass
class _BigOp:
    label: str
    limits: list[OptNode]
    bracketed: bool = False


def _op_level(label: str) -> int:
    if label in RELATION_LABELS:
        return _LEVEL_RELATION
    if label in ADDITIVE_LABELS:
        return _LEVEL_ADDITIVE
    if label in MULTIPLICATIVE_LABELS:
        return _LEVEL_MULTIPLICATIVE
    raise TranslateError(f"operator {label!r} has no operator mapping")


def slt_to_opt(slt: SltTree) -> OptTree:
    """Translate a symbol layout tree into an operator tree."""
    return slt_to_opt_with_stats(slt)[0]


def slt_to_opt_with_stats(slt: SltTree) -> tuple[OptTree, TranslateStats]:
    translator = _Translator()
    root = translator.line_expr(slt.root)
    root.bracketed = False  # a fully parenthesized formula is just the formula
    return OptTree(root), translator.stats
