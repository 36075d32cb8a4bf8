"""Exact solving of single-variable linear equations.

The solver reduces both sides of the equivalence to the linear form
a·x + b over exact rationals and returns the unique solution. Non-linear
structure (products of the unknown, the unknown in a denominator or
exponent) and degenerate equations (0·x = c) raise
:class:`EquationError`.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import EquationError
from ..formula.trees import OptNode, OptTree, SymbolKind


class _Linear:
    """a·x + b with exact coefficients."""

    __slots__ = ("a", "b")

    def __init__(self, a: Fraction = Fraction(0), b: Fraction = Fraction(0)):
        self.a = a
        self.b = b

    def __add__(self, other: "_Linear") -> "_Linear":
        return _Linear(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "_Linear") -> "_Linear":
        return _Linear(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "_Linear":
        return _Linear(-self.a, -self.b)

    def is_constant(self) -> bool:
        return self.a == 0


def _unknown_label(tree: OptTree) -> str:
    names = {n.label for n in tree.nodes() if n.is_leaf() and n.kind == SymbolKind.VARIABLE}
    if len(names) != 1:
        raise EquationError(f"expected exactly one unknown, found {sorted(names)}")
    return names.pop()


def _linear_form(node: OptNode, unknown: str) -> _Linear:
    if node.is_leaf():
        if node.label == unknown:
            return _Linear(Fraction(1), Fraction(0))
        try:
            return _Linear(Fraction(0), Fraction(node.label))
        except ValueError:
            raise EquationError(f"unexpected symbol {node.label!r}") from None
    label = node.label
    if label == "+":
        total = _Linear()
        for child in node.children:
            total = total + _linear_form(child, unknown)
        return total
    if label == "-":
        total = _linear_form(node.children[0], unknown)
        for child in node.children[1:]:
            total = total - _linear_form(child, unknown)
        return total
    if label == "neg":
        return -_linear_form(node.children[0], unknown)
    if label == "times":
        forms = [_linear_form(child, unknown) for child in node.children]
        linear_parts = [f for f in forms if not f.is_constant()]
        if len(linear_parts) > 1:
            raise EquationError("product of unknowns is not linear")
        result = _Linear(Fraction(0), Fraction(1))
        for form in forms:
            if form.is_constant():
                result = _Linear(result.a * form.b, result.b * form.b)
            else:
                if not result.is_constant():
                    raise EquationError("product of unknowns is not linear")
                result = _Linear(form.a * result.b, form.b * result.b)
        return result
    if label == "divide":
        numerator = _linear_form(node.children[0], unknown)
        denominator = _linear_form(node.children[1], unknown)
        if not denominator.is_constant():
            raise EquationError("unknown in a denominator is not linear")
        if denominator.b == 0:
            raise EquationError("division by zero")
        return _Linear(numerator.a / denominator.b, numerator.b / denominator.b)
    if label == "sup":
        base = _linear_form(node.children[0], unknown)
        exponent = _linear_form(node.children[1], unknown)
        if not exponent.is_constant():
            raise EquationError("unknown exponent is not linear")
        if base.is_constant():
            if exponent.b.denominator != 1:
                raise EquationError("fractional power of a constant is not rational")
            return _Linear(Fraction(0), base.b ** int(exponent.b))
        if exponent.b == 1:
            return base
        raise EquationError("power of the unknown is not linear")
    raise EquationError(f"operator {label!r} is not linear")


def solve_linear(equation: OptTree) -> Fraction:
    """Unique solution of a linear single-unknown equation tree."""
    root = equation.root
    if root.label != "=" or len(root.children) != 2:
        raise EquationError("equation tree must have a binary equivalence root")
    unknown = _unknown_label(equation)
    lhs = _linear_form(root.children[0], unknown)
    rhs = _linear_form(root.children[1], unknown)
    slope = lhs.a - rhs.a
    if slope == 0:
        raise EquationError("no unique solution")
    return (rhs.b - lhs.b) / slope


def _contains_unknown(node: OptNode, unknown: str) -> bool:
    return any(n.label == unknown for n in _walk(node))


def _walk(node: OptNode):
    yield node
    for child in node.children:
        yield from _walk(child)


def _substituted(node: OptNode, unknown: str, value: Fraction) -> Fraction:
    form = _linear_form(node, unknown)
    return form.a * value + form.b


def solve_equation(equation: OptTree) -> list[int | float]:
    """Solution values for a word-problem equation.

    When the unknown side is a sum whose every addend contains the
    unknown, the question asked for several quantities (e.g. consecutive
    integers) and each addend's value is reported; otherwise the single
    solution is returned.
    """
    solution = solve_linear(equation)
    root = equation.root
    unknown = _unknown_label(equation)
    sides = [c for c in root.children if _contains_unknown(c, unknown)]
    values: list[Fraction] = [solution]
    if len(sides) == 1:
        side = sides[0]
        if side.label == "+" and len(side.children) >= 2 and all(
            _contains_unknown(c, unknown) for c in side.children
        ):
            values = [_substituted(c, unknown, solution) for c in side.children]
    return [int(v) if v.denominator == 1 else float(v) for v in values]
