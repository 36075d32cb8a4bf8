"""Question-answering metrics: correctness, token overlap, string distance.

Exact match is raw string equality. Accuracy first normalizes both sides:
whitespace trimmed, case folded, numbers compared with relative tolerance
1e-6, and comma-separated lists compared element-wise in order.
"""

from __future__ import annotations

from ..errors import MathfindError

NUMERIC_REL_TOL = 1e-6


def _as_number(text: str) -> float | None:
    try:
        return float(text)
    except ValueError:
        return None


def _numbers_close(a: float, b: float) -> bool:
    if a == b:
        return True
    scale = max(abs(a), abs(b))
    return scale > 0 and abs(a - b) / scale <= NUMERIC_REL_TOL


def answers_match(answer: str, target: str) -> bool:
    """Equality after normalization, with numeric tolerance."""
    a, b = answer.strip().lower(), target.strip().lower()
    a_parts = [p.strip() for p in a.split(",")]
    b_parts = [p.strip() for p in b.split(",")]
    if len(a_parts) != len(b_parts):
        return False
    for pa, pb in zip(a_parts, b_parts):
        na, nb = _as_number(pa), _as_number(pb)
        if na is not None and nb is not None:
            if not _numbers_close(na, nb):
                return False
        elif pa != pb:
            return False
    return True


def exact_match(answers: list[str], targets: list[str]) -> float:
    """Fraction of answers identical to their targets, raw strings."""
    if len(answers) != len(targets):
        raise ValueError("answers and targets must pair up")
    if not answers:
        return 0.0
    return sum(a == t for a, t in zip(answers, targets)) / len(answers)


def accuracy(answers: list[str], targets: list[str], matcher=answers_match) -> float:
    """Fraction of answers within tolerance of their targets."""
    if len(answers) != len(targets):
        raise ValueError("answers and targets must pair up")
    if not answers:
        return 0.0
    return sum(bool(matcher(a, t)) for a, t in zip(answers, targets)) / len(answers)


def _tokens(value) -> list[str]:
    if isinstance(value, str):
        return value.split()
    return list(value)


def token_f1(answer, targets: list) -> float:
    """Max over targets of the token-multiset F1 = 2RP/(R+P).

    Recall is the share of target tokens found in the answer; precision
    the share of answer tokens found in the target. Two empty token lists
    score 1; empty versus non-empty scores 0.
    """
    answer_tokens = _tokens(answer)
    best = 0.0
    for target in targets:
        target_tokens = _tokens(target)
        if not answer_tokens and not target_tokens:
            best = max(best, 1.0)
            continue
        if not answer_tokens or not target_tokens:
            continue
        from collections import Counter

        overlap = sum((Counter(answer_tokens) & Counter(target_tokens)).values())
        precision = overlap / len(answer_tokens)
        recall = overlap / len(target_tokens)
        if precision + recall:
            best = max(best, 2 * precision * recall / (precision + recall))
    return best


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/replace costs."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


def normalized_edit_distance(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    return edit_distance(a, b) / longest if longest else 0.0


def perplexity(correct_answer_probabilities: list[float]) -> float:
    """Mean inverse probability of the correct answers.

    Each probability is the model's estimate for the correct choice; a
    probability p reads as a random choice among 1/p alternatives.
    """
    if not correct_answer_probabilities:
        raise MathfindError("perplexity needs at least one probability")
    for p in correct_answer_probabilities:
        if not 0.0 < p <= 1.0:
            raise MathfindError(f"probability {p!r} outside (0, 1]")
    return sum(1.0 / p for p in correct_answer_probabilities) / len(correct_answer_probabilities)
