"""Number-to-token substitution for word-problem questions."""

from __future__ import annotations

import re

from .evaltree import NumberBinding

_NUMBER = re.compile(r"\d+(?:\.\d+)?")


def substitute_numbers(question: str) -> tuple[str, NumberBinding]:
    """Replace numerals left to right with n1, n2, ... tokens.

    The binding records the original values so the template can be
    rebound; repeated values still get distinct tokens.
    """
    binding = NumberBinding()

    def repl(match: re.Match) -> str:
        text = match.group(0)
        value = float(text) if "." in text else int(text)
        return binding.add(value, lexeme=text)

    template = _NUMBER.sub(repl, question)
    return template, binding


def rebind(template: str, binding: NumberBinding) -> str:
    """Inverse of substitution: put the original numerals back."""
    out = template
    by_length = sorted(zip(binding.pairs, binding.lexemes), key=lambda p: -len(p[0][0]))
    for (token, _), lexeme in by_length:
        out = out.replace(token, lexeme)
    return out
