"""Reading-order linearizations and visual identity of layout trees.

``linearize_dlmf`` turns an SLT into the flat token sequence used by
unified text/formula indexes: symbols stay themselves, operators are
spelled out as words, and two-dimensional structure is bracketed with
Begin/End marker tokens, e.g. ``x^{t-2}=1`` becomes

    x BeginExponent t minus 2 EndExponent Equal 1

``visual_id`` gives the deterministic string two formulas share exactly
when their layout trees are equal; unparseable inputs fall back to the raw
LaTeX string.
"""

from __future__ import annotations

from ..errors import ParseError
from .parser import BIG_OPERATORS, FUNCTION_COMMANDS, GREEK, parse_latex
from .trees import SltNode, SltTree, SpatialRelation, SymbolKind

OPERATOR_WORDS = {
    "+": "plus",
    "-": "minus",
    "=": "Equal",
    "×": "times",
    "⋅": "times",
    "∗": "times",
    "<": "LessThan",
    ">": "GreaterThan",
    "≤": "LessOrEqual",
    "≥": "GreaterOrEqual",
    "≺": "Precedes",
    "≼": "PrecedesOrEqual",
    "infty": "Infinity",
}

BIG_OPERATOR_WORDS = {"sum": "Sum", "int": "Integral", "prod": "Product"}

_SCRIPT_MARKERS = {
    SpatialRelation.SUB: ("BeginSubscript", "EndSubscript"),
    SpatialRelation.SUP: ("BeginExponent", "EndExponent"),
    SpatialRelation.PRESUB: ("BeginPreSubscript", "EndPreSubscript"),
    SpatialRelation.PRESUP: ("BeginPreSuperscript", "EndPreSuperscript"),
}

_LIMIT_MARKERS = {
    SpatialRelation.BELOW: ("BeginLowerLimit", "EndLowerLimit"),
    SpatialRelation.ABOVE: ("BeginUpperLimit", "EndUpperLimit"),
}


def linearize_dlmf(slt: SltTree) -> list[str]:
    """Linearize a layout tree into normalized text tokens."""
    out: list[str] = []
    _emit_line(slt.root, out)
    return out


def _emit_line(first: SltNode | None, out: list[str]) -> None:
    node = first
    while node is not None:
        _emit_node(node, out)
        node = node.children.get(SpatialRelation.NEXT)


def _emit_node(node: SltNode, out: list[str]) -> None:
    for rel in (SpatialRelation.PRESUB, SpatialRelation.PRESUP):
        if rel in node.children:
            begin, end = _SCRIPT_MARKERS[rel]
            out.append(begin)
            _emit_line(node.children[rel], out)
            out.append(end)

    label = node.label
    if label == "frac":
        out.append("BeginFraction")
        _emit_line(node.children.get(SpatialRelation.ABOVE), out)
        out.append("Over")
        _emit_line(node.children.get(SpatialRelation.BELOW), out)
        out.append("EndFraction")
    elif label == "sqrt":
        out.append("BeginRoot")
        _emit_line(node.children.get(SpatialRelation.INSIDE), out)
        out.append("EndRoot")
    elif node.kind == SymbolKind.CONTAINER:
        open_, close = ("OpenBracket", "CloseBracket") if label == "[]" else ("OpenParen", "CloseParen")
        out.append(open_)
        _emit_line(node.children.get(SpatialRelation.INSIDE), out)
        out.append(close)
    elif label in BIG_OPERATOR_WORDS and node.kind == SymbolKind.FUNCTION:
        out.append(BIG_OPERATOR_WORDS[label])
        for rel in (SpatialRelation.BELOW, SpatialRelation.ABOVE):
            if rel in node.children:
                begin, end = _LIMIT_MARKERS[rel]
                out.append(begin)
                _emit_line(node.children[rel], out)
                out.append(end)
    else:
        out.append(OPERATOR_WORDS.get(label, label))

    for rel in (SpatialRelation.SUB, SpatialRelation.SUP):
        if rel in node.children:
            begin, end = _SCRIPT_MARKERS[rel]
            out.append(begin)
            _emit_line(node.children[rel], out)
            out.append(end)


# -- visual identity --------------------------------------------------------


def visual_id(slt: SltTree) -> str:
    """Canonical serialization; equal iff the layout trees are equal."""
    return slt.serialize()


def visual_id_of_latex(latex: str) -> str:
    """Visual id for raw LaTeX; unparseable input falls back to the string."""
    try:
        return visual_id(parse_latex(latex))
    except ParseError:
        return latex


# -- LaTeX emission ---------------------------------------------------------

_LATEX_OPS = {
    "×": "\\times",
    "⋅": "\\cdot",
    "∗": "\\ast",
    "≤": "\\leq",
    "≥": "\\geq",
    "≺": "\\prec",
    "≼": "\\preceq",
    "infty": "\\infty",
}


def slt_to_latex(slt: SltTree) -> str:
    """Emit LaTeX that parses back to the same layout tree."""
    return _latex_line(slt.root).strip()


def _latex_line(first: SltNode | None) -> str:
    parts: list[str] = []
    node = first
    while node is not None:
        parts.append(_latex_node(node))
        node = node.children.get(SpatialRelation.NEXT)
    out = ""
    for part in parts:
        if out and _needs_space(out, part):
            out += " "
        out += part
    return out


def _needs_space(before: str, after: str) -> bool:
    if not after:
        return False
    # Keep digit runs and letter runs from merging into one token, and
    # keep commands from swallowing following letters.
    a, b = before[-1], after[0]
    if a.isdigit() and (b.isdigit() or b == "."):
        return True
    if a.isalpha() and b.isalpha():
        return True
    return False


def _latex_node(node: SltNode) -> str:
    label = node.label
    if label == "frac":
        body = f"\\frac{{{_latex_line(node.children.get(SpatialRelation.ABOVE))}}}{{{_latex_line(node.children.get(SpatialRelation.BELOW))}}}"
    elif label == "sqrt":
        body = f"\\sqrt{{{_latex_line(node.children.get(SpatialRelation.INSIDE))}}}"
    elif node.kind == SymbolKind.CONTAINER:
        open_, close = ("[", "]") if label == "[]" else ("(", ")")
        body = f"{open_}{_latex_line(node.children.get(SpatialRelation.INSIDE))}{close}"
    elif node.kind == SymbolKind.FUNCTION and label in BIG_OPERATORS.values():
        body = f"\\{label}"
        if SpatialRelation.BELOW in node.children:
            body += f"_{{{_latex_line(node.children[SpatialRelation.BELOW])}}}"
        if SpatialRelation.ABOVE in node.children:
            body += f"^{{{_latex_line(node.children[SpatialRelation.ABOVE])}}}"
    elif node.kind == SymbolKind.FUNCTION and label in FUNCTION_COMMANDS:
        body = f"\\{label} "
    elif node.kind == SymbolKind.VARIABLE and label in GREEK:
        body = f"\\{label} "
    elif label in _LATEX_OPS:
        body = f"{_LATEX_OPS[label]} "
    else:
        body = label

    prefix = ""
    for rel, mark in ((SpatialRelation.PRESUB, "_"), (SpatialRelation.PRESUP, "^")):
        if rel in node.children:
            if not prefix:
                prefix = "{}"
            prefix += f"{mark}{{{_latex_line(node.children[rel])}}}"
    suffix = ""
    for rel, mark in ((SpatialRelation.SUB, "_"), (SpatialRelation.SUP, "^")):
        if rel in node.children:
            suffix += f"{mark}{{{_latex_line(node.children[rel])}}}"
    return f"{prefix}{body.rstrip() if suffix else body}{suffix}"
