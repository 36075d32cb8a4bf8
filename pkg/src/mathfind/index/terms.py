"""Index term generation from trees and text.

Every term is namespaced with a family prefix so one vocabulary serves all
engines: ``slt:`` layout tuples, ``opt:`` leaf-root paths, ``wm:c:`` /
``wm:g:`` concrete and generalized subexpression terms, ``tok:``
linearized formula tokens, and ``txt:`` text words.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from ..formula.canonical import enumerate_variables
from ..formula.linearize import linearize_dlmf
from ..formula.trees import (
    OptNode,
    OptTree,
    RELATION_CODE,
    SltTree,
    SpatialRelation,
    SymbolKind,
)

# -- layout tree tuples -----------------------------------------------------


@dataclass(frozen=True)
class SltTuple:
    """(parent symbol, child symbol, relation path) with a repeat count."""

    parent: str
    child: str
    path: str  # one code letter per edge, e.g. "n", "nn", "na"
    count: int = 1


def slt_tuples(slt: SltTree, max_path_length: int = 1) -> list[SltTuple]:
    """All ancestor/descendant symbol pairs within the path-length window.

    Identical (parent, child, path) triples collapse into one tuple with
    an incremented count.
    """
    if max_path_length < 1:
        raise ValueError("max_path_length must be >= 1")
    counts: Counter[tuple[str, str, str]] = Counter()

    def walk(node, trail: list[tuple[str, str]]):
        # trail holds (ancestor label, relation codes joined) downward.
        for rel, child in node.ordered_children():
            code = RELATION_CODE[rel]
            new_trail = [(label, path + code) for label, path in trail if len(path) < max_path_length]
            new_trail.append((node.label, code))
            for label, path in new_trail:
                counts[(label, child.label, path)] += 1
            walk(child, new_trail)

    walk(slt.root, [])
    return [SltTuple(p, c, path, n) for (p, c, path), n in sorted(counts.items())]


@dataclass(frozen=True)
class OptTuple:
    """(parent symbol, descendant symbol, distance) with a repeat count."""

    parent: str
    child: str
    distance: int
    count: int = 1


def opt_tuples(opt: OptTree, max_path_length: int = 1) -> list[OptTuple]:
    if max_path_length < 1:
        raise ValueError("max_path_length must be >= 1")
    counts: Counter[tuple[str, str, int]] = Counter()

    def walk(node: OptNode, ancestors: list[str]):
        for depth, label in enumerate(reversed(ancestors[-max_path_length:]), start=1):
            counts[(label, node.label, depth)] += 1
        for child in node.children:
            walk(child, ancestors + [node.label])

    walk(opt.root, [])
    return [OptTuple(p, c, d, n) for (p, c, d), n in sorted(counts.items())]


# -- operator tree leaf-root paths -------------------------------------------


def opt_leafroot_paths(opt: OptTree, enumerate_vars: bool = False) -> list[tuple[str, ...]]:
    """One label path per leaf, read from the leaf up to the root.

    With ``enumerate_vars`` variable names are replaced by their
    reading-order enumeration first, which lets structurally equal
    formulas with renamed variables share paths.
    """
    tree = enumerate_variables(opt) if enumerate_vars else opt
    paths: list[tuple[str, ...]] = []

    def walk(node: OptNode, above: list[str]):
        if node.is_leaf():
            paths.append(tuple([node.label] + list(reversed(above))))
            return
        for child in node.children:
            walk(child, above + [node.label])

    walk(tree.root, [])
    return paths


# -- generalized subexpression terms ------------------------------------------


@dataclass(frozen=True)
class GeneralizedTermSet:
    concrete: frozenset[str]
    generalized: frozenset[str]


def wikimirs_terms(opt: OptTree) -> GeneralizedTermSet:
    """Concrete and wildcard-generalized subexpression terms.

    Each operator subexpression yields its written form as a concrete term
    and its one-level wildcard form as a generalized term; subexpressions
    the source parenthesized additionally yield the bracketed variants.
    Recursion over the whole tree reaches the fixpoint where no new terms
    can be produced.
    """
    concrete: set[str] = set()
    generalized: set[str] = set()

    def visit(node: OptNode):
        if not node.is_leaf():
            concrete.add(render_infix(node, outer_brackets=False))
            generalized.add(_render_generalized(node))
            if node.bracketed:
                concrete.add(render_infix(node, outer_brackets=True))
                generalized.add("(*)")
            for child in node.children:
                visit(child)

    visit(opt.root)
    if opt.root.is_leaf():
        concrete.add(render_infix(opt.root))
    return GeneralizedTermSet(frozenset(concrete), frozenset(generalized))


_INFIX = {"+": "+", "-": "-", "=": "=", "times": "×", "<": "<", ">": ">", "≤": "≤", "≥": "≥", "≺": "≺", "≼": "≼"}


def render_infix(node: OptNode, outer_brackets: bool | None = None) -> str:
    """Infix rendering of an operator subtree; brackets follow the flags."""
    bracketed = node.bracketed if outer_brackets is None else outer_brackets
    body = _render_body(node, lambda child: render_infix(child))
    return f"({body})" if bracketed else body


def _render_generalized(node: OptNode) -> str:
    return _render_body(node, lambda child: "(*)" if child.bracketed else "*")


def _render_body(node: OptNode, child_fn) -> str:
    label = node.label
    if node.is_leaf():
        return label
    parts = [child_fn(c) for c in node.children]
    if label in _INFIX:
        return _INFIX[label].join(parts)
    if label == "divide":
        return "/".join(parts)
    if label == "sup":
        return f"{parts[0]}^{parts[1]}"
    if label == "sub":
        return f"{parts[0]}_{parts[1]}"
    if label == "apply":
        return f"{parts[0]}({','.join(parts[1:])})"
    if label == "neg":
        return f"-{parts[0]}"
    return f"{label}({','.join(parts)})"


# -- term strings -------------------------------------------------------------


def slt_term_strings(slt: SltTree, max_path_length: int = 1) -> Counter[str]:
    out: Counter[str] = Counter()
    for tup in slt_tuples(slt, max_path_length):
        out[f"slt:{tup.parent}|{tup.child}|{tup.path}"] += tup.count
    return out


def opt_term_strings(opt: OptTree, enumerate_vars: bool = True) -> Counter[str]:
    out: Counter[str] = Counter()
    for path in opt_leafroot_paths(opt, enumerate_vars):
        out["opt:" + "/".join(path)] += 1
    return out


def wikimirs_term_strings(opt: OptTree) -> Counter[str]:
    terms = wikimirs_terms(opt)
    out: Counter[str] = Counter()
    for term in terms.concrete:
        out[f"wm:c:{term}"] += 1
    for term in terms.generalized:
        out[f"wm:g:{term}"] += 1
    return out


def dlmf_term_strings(slt: SltTree) -> Counter[str]:
    return Counter(f"tok:{token}" for token in linearize_dlmf(slt))


_WORD = re.compile(r"[0-9a-z]+")


def tokenize_text(text: str) -> list[str]:
    """Lowercase alphanumeric tokens; no stemming, no stopword removal."""
    return _WORD.findall(text.lower())


def text_term_strings(text: str) -> Counter[str]:
    return Counter(f"txt:{word}" for word in tokenize_text(text))


def term_family(term: str) -> str:
    """Family prefix of a namespaced term (``wm:c`` and ``wm:g`` are one family)."""
    if term.startswith("wm:"):
        return "wm"
    return term.split(":", 1)[0]
