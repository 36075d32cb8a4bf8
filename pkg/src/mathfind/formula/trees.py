"""Symbol layout trees and operator trees.

A symbol layout tree (SLT) records where symbols sit relative to each other
on writing lines: each node is one symbol, and each edge carries one of the
eight spatial relations. A node has at most one child per relation, so a
plain writing line is a chain of NEXT edges and the leftmost symbol of the
main line is the root.

An operator tree (OPT) records the operation hierarchy instead: operators
and applied functions sit at internal nodes, operands at the leaves.
Grouping parentheses are not kept as nodes; a ``bracketed`` flag on the
subexpression root remembers that the source wrote them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class SymbolKind(Enum):
    VARIABLE = "V"
    NUMBER = "N"
    OP_ORDERED = "O"
    OP_UNORDERED = "U"
    FUNCTION = "F"
    CONTAINER = "C"
    WILDCARD = "W"


class SpatialRelation(Enum):
    NEXT = "next"
    SUB = "sub"
    SUP = "sup"
    PRESUB = "presub"
    PRESUP = "presup"
    INSIDE = "inside"
    ABOVE = "above"
    BELOW = "below"


# Child traversal order: scripts and contents come before the writing-line
# successor so reading order is stable for enumeration and serialization.
CHILD_ORDER = (
    SpatialRelation.PRESUB,
    SpatialRelation.PRESUP,
    SpatialRelation.ABOVE,
    SpatialRelation.INSIDE,
    SpatialRelation.BELOW,
    SpatialRelation.SUB,
    SpatialRelation.SUP,
    SpatialRelation.NEXT,
)

# Single-letter relation codes used in tuple index terms.
RELATION_CODE = {
    SpatialRelation.NEXT: "n",
    SpatialRelation.SUP: "a",
    SpatialRelation.SUB: "b",
    SpatialRelation.PRESUP: "p",
    SpatialRelation.PRESUB: "q",
    SpatialRelation.ABOVE: "o",
    SpatialRelation.BELOW: "u",
    SpatialRelation.INSIDE: "w",
}


@dataclass(frozen=True)
class MathSymbol:
    """One symbol token: a label plus its syntactic kind."""

    label: str
    kind: SymbolKind

    def __post_init__(self):
        if not self.label:
            raise ValueError("symbol label must be non-empty")


class SltNode:
    """SLT node: a symbol with at most one child per spatial relation."""

    __slots__ = ("symbol", "children")

    def __init__(self, symbol: MathSymbol, children: dict[SpatialRelation, "SltNode"] | None = None):
        self.symbol = symbol
        self.children: dict[SpatialRelation, SltNode] = children or {}

    @property
    def label(self) -> str:
        return self.symbol.label

    @property
    def kind(self) -> SymbolKind:
        return self.symbol.kind

    def child(self, rel: SpatialRelation) -> "SltNode | None":
        return self.children.get(rel)

    def ordered_children(self) -> list[tuple[SpatialRelation, "SltNode"]]:
        return [(rel, self.children[rel]) for rel in CHILD_ORDER if rel in self.children]

    def copy(self) -> "SltNode":
        return SltNode(self.symbol, {rel: node.copy() for rel, node in self.children.items()})


@dataclass
class SltTree:
    root: SltNode

    def nodes(self) -> list[SltNode]:
        """All nodes in reading (preorder) traversal order."""
        out: list[SltNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            for _, child in reversed(node.ordered_children()):
                stack.append(child)
        return out

    def edges(self) -> list[tuple[SltNode, SltNode, SpatialRelation]]:
        out = []
        for node in self.nodes():
            for rel, child in node.ordered_children():
                out.append((node, child, rel))
        return out

    def size(self) -> int:
        return len(self.nodes())

    def copy(self) -> "SltTree":
        return SltTree(self.root.copy())

    def serialize(self) -> str:
        """Canonical serialization, ``label(kind)[relation:child,...]``.

        Children are listed sorted by relation name, so two trees serialize
        identically iff they are structurally equal. Bit-exact and stable;
        this string is the basis of the visual identity of a formula.
        """
        return _serialize_slt(self.root)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SltTree):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __hash__(self) -> int:
        return hash(self.serialize())


def _serialize_slt(node: SltNode) -> str:
    parts = [
        f"{rel.value}:{_serialize_slt(child)}"
        for rel, child in sorted(node.children.items(), key=lambda kv: kv[0].value)
    ]
    body = f"[{','.join(parts)}]" if parts else ""
    return f"{node.label}({node.kind.value}){body}"


class OptNode:
    """OPT node: operators/functions internal, operands at leaves."""

    __slots__ = ("symbol", "children", "bracketed")

    def __init__(self, symbol: MathSymbol, children: list["OptNode"] | None = None, bracketed: bool = False):
        self.symbol = symbol
        self.children: list[OptNode] = children or []
        self.bracketed = bracketed

    @property
    def label(self) -> str:
        return self.symbol.label

    @property
    def kind(self) -> SymbolKind:
        return self.symbol.kind

    def is_leaf(self) -> bool:
        return not self.children

    def copy(self) -> "OptNode":
        return OptNode(self.symbol, [c.copy() for c in self.children], self.bracketed)


@dataclass
class OptTree:
    root: OptNode

    def nodes(self) -> list[OptNode]:
        out: list[OptNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(node.children))
        return out

    def leaves(self) -> list[OptNode]:
        return [n for n in self.nodes() if n.is_leaf()]

    def size(self) -> int:
        return len(self.nodes())

    def copy(self) -> "OptTree":
        return OptTree(self.root.copy())

    def serialize(self) -> str:
        return _serialize_opt(self.root)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OptTree):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __hash__(self) -> int:
        return hash(self.serialize())


def _serialize_opt(node: OptNode) -> str:
    mark = "!" if node.bracketed else ""
    if node.is_leaf():
        return f"{node.label}({node.kind.value}){mark}"
    body = ",".join(_serialize_opt(c) for c in node.children)
    return f"{node.label}({node.kind.value}){mark}[{body}]"


def variable(label: str) -> OptNode:
    return OptNode(MathSymbol(label, SymbolKind.VARIABLE))


def number(label: str) -> OptNode:
    return OptNode(MathSymbol(label, SymbolKind.NUMBER))


def operator(label: str, children: list[OptNode], ordered: bool = False) -> OptNode:
    kind = SymbolKind.OP_ORDERED if ordered else SymbolKind.OP_UNORDERED
    return OptNode(MathSymbol(label, kind), children)


def function(label: str, children: list[OptNode]) -> OptNode:
    return OptNode(MathSymbol(label, SymbolKind.FUNCTION), children)
