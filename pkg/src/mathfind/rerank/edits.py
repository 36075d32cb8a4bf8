"""Weighted ordered tree-edit distance and its similarity normalizations.

The distance is the classic postorder/keyroots dynamic program over
ordered labeled trees. Layout trees order each node's children by spatial
relation (scripts before the writing-line successor); operator trees use
argument order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..formula.trees import OptNode, OptTree, SltNode, SltTree


@dataclass
class EditCosts:
    """Insertion/deletion/substitution costs by node label.

    ``substitute(a, a)`` is always 0. The default is unit cost for every
    operation; a cost table can refine individual labels or label pairs.
    """

    insert_cost: Callable[[str], float] = lambda label: 1.0
    delete_cost: Callable[[str], float] = lambda label: 1.0
    substitute_table: dict[tuple[str, str], float] = field(default_factory=dict)
    substitute_default: float = 1.0

    def insert(self, label: str) -> float:
        return self.insert_cost(label)

    def delete(self, label: str) -> float:
        return self.delete_cost(label)

    def substitute(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        return self.substitute_table.get((a, b), self.substitute_default)

    @classmethod
    def unit(cls) -> "EditCosts":
        return cls()


@dataclass(frozen=True)
class PlainTree:
    """Label/children view shared by both tree types."""

    label: str
    children: tuple["PlainTree", ...] = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def as_plain(tree) -> PlainTree:
    if isinstance(tree, PlainTree):
        return tree
    if isinstance(tree, SltTree):
        return _plain_slt(tree.root)
    if isinstance(tree, OptTree):
        return _plain_opt(tree.root)
    raise TypeError(f"not a tree: {tree!r}")


def _plain_slt(node: SltNode) -> PlainTree:
    return PlainTree(node.label, tuple(_plain_slt(c) for _, c in node.ordered_children()))


def _plain_opt(node: OptNode) -> PlainTree:
    return PlainTree(node.label, tuple(_plain_opt(c) for c in node.children))


class _Annotated:
    def __init__(self, tree: PlainTree):
        self.labels: list[str] = []
        self.lld: list[int] = []  # leftmost leaf descendant, postorder index
        self._walk(tree)
        n = len(self.labels)
        seen: dict[int, int] = {}
        for i in range(n):
            seen[self.lld[i]] = i
        self.keyroots = sorted(seen.values())

    def _walk(self, node: PlainTree) -> int:
        first_leaf = None
        for child in node.children:
            leaf = self._walk(child)
            if first_leaf is None:
                first_leaf = leaf
        index = len(self.labels)
        self.labels.append(node.label)
        self.lld.append(first_leaf if first_leaf is not None else index)
        return self.lld[index]


def tree_edit_distance(t1, t2, costs: EditCosts | None = None) -> float:
    """Minimal edit cost converting t1 into t2 under ordered semantics."""
    costs = costs or EditCosts.unit()
    a = _Annotated(as_plain(t1))
    b = _Annotated(as_plain(t2))
    n, m = len(a.labels), len(b.labels)
    dist = [[0.0] * m for _ in range(n)]

    for i in a.keyroots:
        for j in b.keyroots:
            _keyroot_dist(a, b, i, j, costs, dist)
    return dist[n - 1][m - 1]


def _keyroot_dist(a: _Annotated, b: _Annotated, i: int, j: int, costs: EditCosts, dist) -> None:
    li, lj = a.lld[i], b.lld[j]
    rows, cols = i - li + 2, j - lj + 2
    fd = [[0.0] * cols for _ in range(rows)]
    for di in range(1, rows):
        fd[di][0] = fd[di - 1][0] + costs.delete(a.labels[li + di - 1])
    for dj in range(1, cols):
        fd[0][dj] = fd[0][dj - 1] + costs.insert(b.labels[lj + dj - 1])
    for di in range(1, rows):
        for dj in range(1, cols):
            ai, bj = li + di - 1, lj + dj - 1
            del_cost = fd[di - 1][dj] + costs.delete(a.labels[ai])
            ins_cost = fd[di][dj - 1] + costs.insert(b.labels[bj])
            if a.lld[ai] == li and b.lld[bj] == lj:
                sub_cost = fd[di - 1][dj - 1] + costs.substitute(a.labels[ai], b.labels[bj])
                fd[di][dj] = min(del_cost, ins_cost, sub_cost)
                dist[ai][bj] = fd[di][dj]
            else:
                bridge = fd[a.lld[ai] - li][b.lld[bj] - lj] + dist[ai][bj]
                fd[di][dj] = min(del_cost, ins_cost, bridge)


def tree_size(tree) -> int:
    return as_plain(tree).size()


def sim_normalized(t1, t2, costs: EditCosts | None = None) -> float:
    """1 − dist/(|T1|+|T2|): inverse distance normalized by tree sizes."""
    return 1.0 - tree_edit_distance(t1, t2, costs) / (tree_size(t1) + tree_size(t2))


def sim_inverse(t1, t2, costs: EditCosts | None = None) -> float:
    """1/(dist+1); adding one avoids division by zero on equal trees."""
    return 1.0 / (tree_edit_distance(t1, t2, costs) + 1.0)


def combined_ted_score(
    query_slt,
    cand_slt,
    query_opt,
    cand_opt,
    w_slt: float = 0.5,
    w_opt: float = 0.5,
    costs: EditCosts | None = None,
) -> float:
    """Weighted combination of layout-tree and operator-tree similarities."""
    if w_slt < 0 or w_opt < 0 or abs(w_slt + w_opt - 1.0) > 1e-9:
        raise ValueError("weights must be nonnegative and sum to 1")
    score = 0.0
    if w_slt:
        score += w_slt * sim_inverse(query_slt, cand_slt, costs)
    if w_opt:
        score += w_opt * sim_inverse(query_opt, cand_opt, costs)
    return score
