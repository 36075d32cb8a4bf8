"""Greedy subtree alignment scoring for layout trees.

The alignment procedure anchors on every pair of compatible nodes, grows
each anchor into a connected common subtree by matching children along
equal spatial relations, and keeps the best-scoring alignment. The main
score is the harmonic mean of symbol recall and relationship recall under
exact label matching (wildcards match anything); the tie-breakers are
symbol precision allowing variable unification, and raw symbol recall.
Relationship recall counts query edges whose both endpoints are matched.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..formula.trees import SltNode, SltTree, SymbolKind


@dataclass(frozen=True)
class AlignmentScore:
    mss: float
    tiebreak_precision_unified: float
    tiebreak_recall_raw: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.mss, self.tiebreak_precision_unified, self.tiebreak_recall_raw)


def _exact_compatible(q: SltNode, c: SltNode) -> bool:
    if q.kind == SymbolKind.WILDCARD or c.kind == SymbolKind.WILDCARD:
        return True
    return q.label == c.label


def _unified_compatible(q: SltNode, c: SltNode, mapping: dict[str, str]) -> bool:
    if _exact_compatible(q, c):
        return True
    if q.kind == SymbolKind.VARIABLE and c.kind == SymbolKind.VARIABLE:
        bound = mapping.get(q.label)
        return bound is None or bound == c.label
    return False


def _grow(anchor_q: SltNode, anchor_c: SltNode, unified: bool) -> list[tuple[SltNode, SltNode]]:
    mapping: dict[str, str] = {}
    bound_targets: set[str] = set()

    def compatible(q: SltNode, c: SltNode) -> bool:
        if not unified:
            return _exact_compatible(q, c)
        return _unified_compatible(q, c, mapping)

    if not compatible(anchor_q, anchor_c):
        return []
    pairs = [(anchor_q, anchor_c)]
    if unified and anchor_q.kind == SymbolKind.VARIABLE and anchor_c.kind == SymbolKind.VARIABLE:
        mapping[anchor_q.label] = anchor_c.label
        bound_targets.add(anchor_c.label)
    queue = [(anchor_q, anchor_c)]
    while queue:
        qn, cn = queue.pop(0)
        for rel, q_child in qn.ordered_children():
            c_child = cn.children.get(rel)
            if c_child is None or not compatible(q_child, c_child):
                continue
            if unified and q_child.kind == SymbolKind.VARIABLE and c_child.kind == SymbolKind.VARIABLE:
                if q_child.label not in mapping and c_child.label in bound_targets:
                    continue  # keep the unification one-to-one
                mapping.setdefault(q_child.label, c_child.label)
                bound_targets.add(c_child.label)
            pairs.append((q_child, c_child))
            queue.append((q_child, c_child))
    return pairs


def _harmonic(a: float, b: float) -> float:
    return 2 * a * b / (a + b) if a + b > 0 else 0.0


def mss_score(query_slt: SltTree, cand_slt: SltTree) -> AlignmentScore:
    """Best connected common-subtree alignment between query and candidate."""
    q_nodes = query_slt.nodes()
    c_nodes = cand_slt.nodes()
    q_edges = sum(len(n.children) for n in q_nodes)

    best_mss = 0.0
    best_recall = 0.0
    for qn in q_nodes:
        for cn in c_nodes:
            pairs = _grow(qn, cn, unified=False)
            if not pairs:
                continue
            matched_syms = len(pairs)
            matched_edges = len(pairs) - 1
            recall_syms = matched_syms / len(q_nodes)
            recall_edges = matched_edges / q_edges if q_edges else 1.0
            mss = _harmonic(recall_syms, recall_edges)
            if mss > best_mss:
                best_mss = mss
            if recall_syms > best_recall:
                best_recall = recall_syms

    best_precision = 0.0
    for qn in q_nodes:
        for cn in c_nodes:
            pairs = _grow(qn, cn, unified=True)
            if pairs:
                best_precision = max(best_precision, len(pairs) / len(c_nodes))

    return AlignmentScore(best_mss, best_precision, best_recall)
