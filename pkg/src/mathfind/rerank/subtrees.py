"""Common-subtree scoring for operator trees.

Up to three node-disjoint largest common subtrees are extracted greedily:
the size of the best rooted common subtree for every node pair comes from
a dynamic program (positional child matching for ordered operators and
functions, best assignment for unordered operators), the largest is
removed, and the search repeats on the remaining nodes. The final score is
a weighted sum of matched operands (leaves) and operators, normalized by
the query's own totals.
"""

from __future__ import annotations

from itertools import permutations

from ..formula.trees import OptNode, OptTree, SymbolKind

_MAX_EXACT_ARITY = 6


def _match_pairs(q: OptNode, c: OptNode, used_q: set[int], used_c: set[int]) -> list[tuple[OptNode, OptNode]]:
    """Pairs of the largest common subtree rooted at (q, c), or []."""
    if id(q) in used_q or id(c) in used_c:
        return []
    if q.label != c.label or q.kind != c.kind:
        return []
    pairs = [(q, c)]
    if q.is_leaf() or c.is_leaf():
        return pairs
    if q.kind == SymbolKind.OP_UNORDERED:
        pairs.extend(_best_assignment(q.children, c.children, used_q, used_c))
    else:
        for q_child, c_child in zip(q.children, c.children):
            pairs.extend(_match_pairs(q_child, c_child, used_q, used_c))
    return pairs


def _best_assignment(
    q_children: list[OptNode], c_children: list[OptNode], used_q: set[int], used_c: set[int]
) -> list[tuple[OptNode, OptNode]]:
    table = [
        [_match_pairs(qc, cc, used_q, used_c) for cc in c_children]
        for qc in q_children
    ]
    smaller, larger = (range(len(q_children)), range(len(c_children)))
    swap = len(q_children) > len(c_children)
    if swap:
        smaller, larger = larger, smaller

    def gain(si: int, li: int) -> list:
        return table[li][si] if swap else table[si][li]

    if len(list(larger)) <= _MAX_EXACT_ARITY:
        best: list[tuple[OptNode, OptNode]] = []
        best_size = -1
        for perm in permutations(larger, len(list(smaller))):
            pairs: list[tuple[OptNode, OptNode]] = []
            for si, li in zip(smaller, perm):
                pairs.extend(gain(si, li))
            if len(pairs) > best_size:
                best, best_size = pairs, len(pairs)
        return best
    # greedy fallback for very wide nodes
    taken_s: set[int] = set()
    taken_l: set[int] = set()
    options = sorted(
        ((len(gain(si, li)), si, li) for si in smaller for li in larger),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    pairs = []
    for size, si, li in options:
        if size == 0 or si in taken_s or li in taken_l:
            continue
        taken_s.add(si)
        taken_l.add(li)
        pairs.extend(gain(si, li))
    return pairs


def _postorder_index(tree: OptTree) -> dict[int, int]:
    order: dict[int, int] = {}

    def walk(node: OptNode):
        for child in node.children:
            walk(child)
        order[id(node)] = len(order)

    walk(tree.root)
    return order


def common_subtree_pairs(query: OptTree, cand: OptTree, max_subtrees: int = 3) -> list[tuple[OptNode, OptNode]]:
    """Greedy extraction of up to ``max_subtrees`` disjoint common subtrees."""
    q_order = _postorder_index(query)
    c_order = _postorder_index(cand)
    used_q: set[int] = set()
    used_c: set[int] = set()
    matched: list[tuple[OptNode, OptNode]] = []
    for _ in range(max_subtrees):
        best: list[tuple[OptNode, OptNode]] = []
        best_key = None
        for qn in query.nodes():
            for cn in cand.nodes():
                pairs = _match_pairs(qn, cn, used_q, used_c)
                if not pairs:
                    continue
                key = (-len(pairs), q_order[id(qn)], c_order[id(cn)])
                if best_key is None or key < best_key:
                    best, best_key = pairs, key
        if not best:
            break
        matched.extend(best)
        for qn, cn in best:
            used_q.add(id(qn))
            used_c.add(id(cn))
    return matched


def approach0_rerank(
    query_opt: OptTree,
    cand_opt: OptTree,
    w_operand: float = 0.6,
    w_operator: float = 0.4,
    max_subtrees: int = 3,
) -> float:
    """Similarity from matched leaves and operators of common subtrees."""
    pairs = common_subtree_pairs(query_opt, cand_opt, max_subtrees)
    matched_leaves = sum(1 for q, _ in pairs if q.is_leaf())
    matched_ops = len(pairs) - matched_leaves
    q_leaves = sum(1 for n in query_opt.nodes() if n.is_leaf())
    q_ops = query_opt.size() - q_leaves
    denom = w_operand * q_leaves + w_operator * q_ops
    if denom == 0:
        return 0.0
    return (w_operand * matched_leaves + w_operator * matched_ops) / denom
