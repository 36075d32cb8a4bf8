"""LaTeX parsing into symbol layout trees.

The supported grammar is a deliberately closed subset: identifiers,
digits/decimals, the operators ``+ - = < > \\leq \\geq \\prec \\preceq
\\times \\cdot \\ast``, implicit multiplication, ``^``/``_`` scripts,
``\\frac{}{}``, ``\\sqrt{}``, ``\\sum``/``\\int``/``\\prod`` with limits,
parentheses and brackets (kept as container symbols), Greek-letter
commands, named function commands (``\\log`` etc.), ``?name`` wildcards,
and prefix scripts written as ``{}^{a}_{b}X``. Anything else raises
:class:`ParseError` with the byte offset of the offending input.

Two lexical grouping rules follow common typesetting practice: runs of
digits (with at most one decimal point) form a single number token, and a
run of two or more adjacent letters immediately followed by ``(`` forms a
single function token, so ``idf(t_i)`` parses with ``idf`` as one symbol
while ``ab`` stays an implicit product of two variables.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError
from .trees import MathSymbol, SltNode, SltTree, SpatialRelation, SymbolKind

GREEK = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "omicron", "pi", "rho",
    "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
    "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Upsilon",
    "Phi", "Psi", "Omega",
}

FUNCTION_COMMANDS = {
    "log", "ln", "sin", "cos", "tan", "cot", "sec", "csc", "exp", "min",
    "max", "lim",
}

BIG_OPERATORS = {"sum": "sum", "int": "int", "prod": "prod"}

# Canonical display label and symbol kind for each operator spelling.
OPERATOR_COMMANDS = {
    "times": ("×", SymbolKind.OP_UNORDERED),
    "cdot": ("⋅", SymbolKind.OP_UNORDERED),
    "ast": ("∗", SymbolKind.OP_UNORDERED),
    "leq": ("≤", SymbolKind.OP_ORDERED),
    "geq": ("≥", SymbolKind.OP_ORDERED),
    "prec": ("≺", SymbolKind.OP_ORDERED),
    "preceq": ("≼", SymbolKind.OP_ORDERED),
}

CHAR_OPERATORS = {
    "+": ("+", SymbolKind.OP_UNORDERED),
    "-": ("-", SymbolKind.OP_ORDERED),
    "*": ("∗", SymbolKind.OP_UNORDERED),
    "=": ("=", SymbolKind.OP_UNORDERED),
    "<": ("<", SymbolKind.OP_ORDERED),
    ">": (">", SymbolKind.OP_ORDERED),
}


@dataclass
class _Token:
    type: str  # letter number funcname command op caret underscore lbrace rbrace lparen rparen lbracket rbracket wildcard
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "\\":
            j = i + 1
            while j < n and src[j].isalpha():
                j += 1
            name = src[i + 1:j]
            if not name:
                raise ParseError("lone backslash", i)
            tokens.append(_Token("command", name, i))
            i = j
            continue
        if ch.isdigit():
            j = i
            seen_dot = False
            while j < n and (src[j].isdigit() or (src[j] == "." and not seen_dot and j + 1 < n and src[j + 1].isdigit())):
                if src[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(_Token("number", src[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and src[j].isalpha():
                j += 1
            run = src[i:j]
            # Letter runs of length >= 2 directly before "(" are one
            # function token (whitespace before the paren is ignored).
            k = j
            while k < n and src[k].isspace():
                k += 1
            if len(run) >= 2 and k < n and src[k] == "(":
                tokens.append(_Token("funcname", run, i))
            else:
                for off, letter in enumerate(run):
                    tokens.append(_Token("letter", letter, i + off))
            i = j
            continue
        if ch == "?":
            j = i + 1
            while j < n and (src[j].isalnum()):
                j += 1
            tokens.append(_Token("wildcard", src[i:j], i))
            i = j
            continue
        simple = {
            "^": "caret", "_": "underscore", "{": "lbrace", "}": "rbrace",
            "(": "lparen", ")": "rparen", "[": "lbracket", "]": "rbracket",
        }
        if ch in simple:
            tokens.append(_Token(simple[ch], ch, i))
            i += 1
            continue
        if ch in CHAR_OPERATORS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unsupported character {ch!r}", i)
    return tokens


class _PrescriptMark:
    """Placeholder produced by an empty group; its scripts attach to the
    following symbol as PRESUB/PRESUP."""

    def __init__(self, offset: int):
        self.offset = offset
        self.scripts: dict[SpatialRelation, SltNode] = {}


@dataclass
class _Segment:
    first: SltNode
    last: SltNode


class _Parser:
    def __init__(self, tokens: list[_Token], source_len: int):
        self.tokens = tokens
        self.pos = 0
        self.source_len = source_len

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.source_len)
        self.pos += 1
        return tok

    def expect(self, type_: str, what: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.type != type_:
            offset = tok.offset if tok else self.source_len
            raise ParseError(f"expected {what}", offset)
        return self.take()

    # -- lines ------------------------------------------------------------

    def parse_line(self, stop: frozenset[str]) -> SltNode | None:
        first: SltNode | None = None
        last: SltNode | None = None
        pending: _PrescriptMark | None = None
        while True:
            tok = self.peek()
            if tok is None or tok.type in stop:
                break
            item = self.parse_element()
            if isinstance(item, _PrescriptMark):
                self.attach_scripts(item)
                if pending is not None:
                    raise ParseError("consecutive prescript groups", item.offset)
                pending = item
                continue
            self.attach_scripts(item.last)
            if pending is not None:
                for rel, node in pending.scripts.items():
                    item.first.children[rel] = node
                pending = None
            if last is None:
                first = item.first
            else:
                last.children[SpatialRelation.NEXT] = item.first
            last = item.last
        if pending is not None:
            raise ParseError("prescripts with no following symbol", pending.offset)
        return first

    def parse_element(self) -> "_Segment | _PrescriptMark":
        tok = self.take()
        if tok.type == "letter":
            return _atom(tok.text, SymbolKind.VARIABLE)
        if tok.type == "number":
            return _atom(tok.text, SymbolKind.NUMBER)
        if tok.type == "funcname":
            return _atom(tok.text, SymbolKind.FUNCTION)
        if tok.type == "wildcard":
            return _atom(tok.text, SymbolKind.WILDCARD)
        if tok.type == "op":
            label, kind = CHAR_OPERATORS[tok.text]
            return _atom(label, kind)
        if tok.type == "command":
            return self.parse_command(tok)
        if tok.type == "lparen":
            return self.parse_container("rparen", "()", tok.offset)
        if tok.type == "lbracket":
            return self.parse_container("rbracket", "[]", tok.offset)
        if tok.type == "lbrace":
            inner = self.parse_line(frozenset({"rbrace"}))
            self.expect("rbrace", "closing brace")
            if inner is None:
                return _PrescriptMark(tok.offset)
            return _Segment(inner, _line_end(inner))
        if tok.type in ("caret", "underscore"):
            raise ParseError("script without a base symbol", tok.offset)
        raise ParseError(f"unexpected {tok.text!r}", tok.offset)

    def parse_command(self, tok: _Token) -> _Segment:
        name = tok.text
        if name in GREEK:
            return _atom(name, SymbolKind.VARIABLE)
        if name in FUNCTION_COMMANDS:
            return _atom(name, SymbolKind.FUNCTION)
        if name in OPERATOR_COMMANDS:
            label, kind = OPERATOR_COMMANDS[name]
            return _atom(label, kind)
        if name in BIG_OPERATORS:
            return _atom(BIG_OPERATORS[name], SymbolKind.FUNCTION)
        if name == "infty":
            return _atom("infty", SymbolKind.NUMBER)
        if name == "frac":
            node = SltNode(MathSymbol("frac", SymbolKind.OP_ORDERED))
            node.children[SpatialRelation.ABOVE] = self.parse_required_group("numerator", tok.offset)
            node.children[SpatialRelation.BELOW] = self.parse_required_group("denominator", tok.offset)
            return _Segment(node, node)
        if name == "sqrt":
            node = SltNode(MathSymbol("sqrt", SymbolKind.FUNCTION))
            node.children[SpatialRelation.INSIDE] = self.parse_required_group("radicand", tok.offset)
            return _Segment(node, node)
        raise ParseError(f"unsupported command \\{name}", tok.offset)

    def parse_container(self, closer: str, label: str, offset: int) -> _Segment:
        inner = self.parse_line(frozenset({closer}))
        tok = self.peek()
        if tok is None or tok.type != closer:
            raise ParseError("unbalanced group", offset)
        self.take()
        node = SltNode(MathSymbol(label, SymbolKind.CONTAINER))
        if inner is not None:
            node.children[SpatialRelation.INSIDE] = inner
        return _Segment(node, node)

    def parse_required_group(self, what: str, offset: int) -> SltNode:
        self.expect("lbrace", f"{{...}} for {what}")
        inner = self.parse_line(frozenset({"rbrace"}))
        self.expect("rbrace", "closing brace")
        if inner is None:
            raise ParseError(f"empty {what}", offset)
        return inner

    # -- scripts ----------------------------------------------------------

    def attach_scripts(self, base: "SltNode | _PrescriptMark") -> None:
        is_mark = isinstance(base, _PrescriptMark)
        big = not is_mark and base.label in BIG_OPERATORS.values() and base.kind == SymbolKind.FUNCTION
        while True:
            tok = self.peek()
            if tok is None or tok.type not in ("caret", "underscore"):
                return
            self.take()
            if tok.type == "caret":
                rel = SpatialRelation.PRESUP if is_mark else (
                    SpatialRelation.ABOVE if big else SpatialRelation.SUP)
            else:
                rel = SpatialRelation.PRESUB if is_mark else (
                    SpatialRelation.BELOW if big else SpatialRelation.SUB)
            target = base.scripts if is_mark else base.children
            if rel in target:
                raise ParseError("duplicate script", tok.offset)
            target[rel] = self.parse_script_arg(tok.offset)

    def parse_script_arg(self, offset: int) -> SltNode:
        tok = self.peek()
        if tok is None:
            raise ParseError("missing script argument", self.source_len)
        if tok.type == "lbrace":
            self.take()
            inner = self.parse_line(frozenset({"rbrace"}))
            self.expect("rbrace", "closing brace")
            if inner is None:
                raise ParseError("empty script argument", offset)
            return inner
        # Unbraced arguments take a single character, as in TeX: x^12 is
        # x^1 followed by 2.
        if tok.type == "number" and len(tok.text) > 1:
            self.take()
            rest = _Token("number", tok.text[1:], tok.offset + 1)
            self.tokens.insert(self.pos, rest)
            return SltNode(MathSymbol(tok.text[0], SymbolKind.NUMBER))
        item = self.parse_element()
        if isinstance(item, _PrescriptMark) or item.first is not item.last:
            raise ParseError("script argument must be a single symbol or group", offset)
        return item.first


def _atom(label: str, kind: SymbolKind) -> _Segment:
    node = SltNode(MathSymbol(label, kind))
    return _Segment(node, node)


def _line_end(node: SltNode) -> SltNode:
    while SpatialRelation.NEXT in node.children:
        node = node.children[SpatialRelation.NEXT]
    return node


def parse_latex(latex: str) -> SltTree:
    """Parse a LaTeX formula into its symbol layout tree."""
    tokens = _tokenize(latex)
    parser = _Parser(tokens, len(latex))
    root = parser.parse_line(frozenset())
    if parser.peek() is not None:
        raise ParseError("unbalanced group", parser.peek().offset)
    if root is None:
        raise ParseError("empty formula", 0)
    return SltTree(root)
