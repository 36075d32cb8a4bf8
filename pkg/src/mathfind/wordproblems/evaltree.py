"""Expression-tree and traversal evaluation with number bindings.

An equation tree ties the answer variable to an expression under an
equivalence root; the expression evaluates bottom-up. The two traversal
orders evaluate with a stack instead: arguments-first sequences (operands
precede their operator, ``n1 n2 + n3 ×``) use an operand stack consumed on
each operator; operations-first sequences (``× + n1 n2 n3``) are scanned
right to left the same way. All three paths agree on the same tree.

Arithmetic is exact rational internally; integral results come back as
ints, anything else as floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isfinite

from ..errors import EvaluationError, MalformedSequence
from ..formula.trees import MathSymbol, OptNode, OptTree, SymbolKind

ANSWER_VARIABLE = "chi"

_BINARY_OPS = {"+", "-", "*", "/", "^"}
_OP_ALIASES = {"times": "*", "×": "*", "⋅": "*", "∗": "*", "divide": "/", "÷": "/", "sup": "^"}


def canonical_op(label: str) -> str | None:
    op = _OP_ALIASES.get(label, label)
    return op if op in _BINARY_OPS else None


@dataclass
class NumberBinding:
    """Ordered (token, value) pairs recording substituted numbers.

    The source lexemes are kept alongside so rebinding a template
    reproduces the original text exactly (e.g. ``7.10`` stays ``7.10``).
    """

    pairs: list[tuple[str, float]] = field(default_factory=list)
    lexemes: list[str] = field(default_factory=list)

    def __post_init__(self):
        tokens = [t for t, _ in self.pairs]
        if len(tokens) != len(set(tokens)):
            raise ValueError("binding tokens must be unique")
        for _, value in self.pairs:
            if not isfinite(value):
                raise ValueError("binding values must be finite")
        if not self.lexemes:
            self.lexemes = [self._render(v) for _, v in self.pairs]

    @staticmethod
    def _render(value: float) -> str:
        return str(int(value)) if float(value).is_integer() and not isinstance(value, float) else str(value)

    def lookup(self) -> dict[str, float]:
        return dict(self.pairs)

    def add(self, value: float, lexeme: str | None = None) -> str:
        token = f"n{len(self.pairs) + 1}"
        self.pairs.append((token, value))
        self.lexemes.append(lexeme if lexeme is not None else self._render(value))
        return token


def _to_number(text: str, bindings: dict[str, float]) -> Fraction:
    if text in bindings:
        return Fraction(str(bindings[text]))
    try:
        return Fraction(text)
    except ValueError:
        raise EvaluationError(f"unbound token {text!r}") from None


def _apply(op: str, left: Fraction, right: Fraction) -> Fraction:
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if right == 0:
            raise EvaluationError("division by zero")
        return left / right
    if op == "^":
        if right.denominator == 1:
            if left == 0 and right < 0:
                raise EvaluationError("division by zero")
            return left ** int(right)
        return Fraction(str(float(left) ** float(right)))
    raise AssertionError(op)


def _plain(value: Fraction) -> int | float:
    return int(value) if value.denominator == 1 else float(value)


def evaluate_opt(expr: OptTree | OptNode, bindings: NumberBinding | None = None) -> int | float:
    """Evaluate an operator tree bottom-up over +, -, ×, ÷, and powers."""
    lookup = bindings.lookup() if bindings else {}
    root = expr.root if isinstance(expr, OptTree) else expr

    def walk(node: OptNode) -> Fraction:
        if node.is_leaf():
            return _to_number(node.label, lookup)
        op = canonical_op(node.label)
        if node.label == "neg":
            return -walk(node.children[0])
        if op is None:
            raise EvaluationError(f"operator {node.label!r} is not evaluable")
        values = [walk(child) for child in node.children]
        result = values[0]
        for value in values[1:]:
            result = _apply(op, result, value)
        return result

    return _plain(walk(root))


class TraversalMode(Enum):
    ARGS_FIRST = "args_first"
    OPS_FIRST = "ops_first"


def eval_traversal(
    sequence: list[str],
    mode: TraversalMode,
    bindings: NumberBinding | None = None,
) -> int | float:
    """Stack evaluation of a binary-operator traversal sequence."""
    lookup = bindings.lookup() if bindings else {}
    tokens = sequence if mode == TraversalMode.ARGS_FIRST else list(reversed(sequence))
    stack: list[Fraction] = []
    for token in tokens:
        op = canonical_op(token)
        if op is not None:
            if len(stack) < 2:
                raise MalformedSequence(f"operator {token!r} lacks operands")
            if mode == TraversalMode.ARGS_FIRST:
                right = stack.pop()
                left = stack.pop()
            else:
                left = stack.pop()
                right = stack.pop()
            stack.append(_apply(op, left, right))
        else:
            try:
                stack.append(_to_number(token, lookup))
            except EvaluationError as err:
                raise MalformedSequence(str(err)) from None
    if len(stack) != 1:
        raise MalformedSequence(f"{len(stack)} values left on the stack")
    return _plain(stack[0])


def to_args_first(expr: OptTree | OptNode) -> list[str]:
    """Traversal with arguments before operations (binary, left-folded)."""
    root = expr.root if isinstance(expr, OptTree) else expr
    out: list[str] = []

    def walk(node: OptNode):
        if node.is_leaf():
            out.append(node.label)
            return
        op = canonical_op(node.label) or node.label
        walk(node.children[0])
        for child in node.children[1:]:
            walk(child)
            out.append(op)

    walk(root)
    return out


def to_ops_first(expr: OptTree | OptNode) -> list[str]:
    """Traversal with operations before arguments (binary, left-folded)."""
    root = expr.root if isinstance(expr, OptTree) else expr

    def walk(node: OptNode) -> list[str]:
        if node.is_leaf():
            return [node.label]
        op = canonical_op(node.label) or node.label
        seq = walk(node.children[0])
        for child in node.children[1:]:
            seq = [op] + seq + walk(child)
        return seq

    return walk(root)


def make_equation_tree(expr: OptTree, answer_variable: str = ANSWER_VARIABLE) -> OptTree:
    """Attach the answer variable to an expression under an equivalence."""
    var = OptNode(MathSymbol(answer_variable, SymbolKind.VARIABLE))
    root = OptNode(MathSymbol("=", SymbolKind.OP_UNORDERED), [var, expr.root.copy()])
    return OptTree(root)


def is_equation_tree(tree: OptTree, answer_variable: str = ANSWER_VARIABLE) -> bool:
    root = tree.root
    if root.label != "=" or len(root.children) != 2:
        return False
    count = sum(1 for n in tree.nodes() if n.label == answer_variable)
    return count == 1 and any(c.label == answer_variable for c in root.children)
