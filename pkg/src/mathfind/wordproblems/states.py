"""State-sequence solving of transfer arithmetic problems.

Problems arrive as a controlled-language script, one sentence per state:

    <Subject> <verb> <number|some> [of her/his/their] [<attribute>] <entity>
    <Subject> <verb> ... to/from <Subject2>           (transfers)
    How many [<attribute>] <entity> does/did <Subject> have?

Verbs map to seven categories: observations assert a quantity, positive/
negative verbs adjust one container, transfers move a quantity between two
containers, construct/destroy adjust both. ``some`` introduces a symbolic
unknown, as does the starting quantity of a container first seen through
an operation. Observation constraints feed exact linear elimination; the
question asks for a container's final (``does``) or initial (``did``)
quantity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from ..errors import UnknownVerb, Unsolvable


class VerbCategory(Enum):
    OBSERVATION = "observation"
    POSITIVE = "positive"
    NEGATIVE = "negative"
    POSITIVE_TRANSFER = "positive_transfer"
    NEGATIVE_TRANSFER = "negative_transfer"
    CONSTRUCT = "construct"
    DESTROY = "destroy"


VERB_LEXICON: dict[str, VerbCategory] = {
    "had": VerbCategory.OBSERVATION,
    "has": VerbCategory.OBSERVATION,
    "have": VerbCategory.OBSERVATION,
    "owns": VerbCategory.OBSERVATION,
    "got": VerbCategory.POSITIVE,
    "found": VerbCategory.POSITIVE,
    "bought": VerbCategory.POSITIVE,
    "won": VerbCategory.POSITIVE,
    "earned": VerbCategory.POSITIVE,
    "picked": VerbCategory.POSITIVE,
    "lost": VerbCategory.NEGATIVE,
    "ate": VerbCategory.NEGATIVE,
    "spent": VerbCategory.NEGATIVE,
    "dropped": VerbCategory.NEGATIVE,
    "broke": VerbCategory.NEGATIVE,
    "used": VerbCategory.NEGATIVE,
    "gave": VerbCategory.NEGATIVE_TRANSFER,
    "sold": VerbCategory.NEGATIVE_TRANSFER,
    "received": VerbCategory.POSITIVE_TRANSFER,
    "took": VerbCategory.POSITIVE_TRANSFER,
    "built": VerbCategory.CONSTRUCT,
    "made": VerbCategory.CONSTRUCT,
    "destroyed": VerbCategory.DESTROY,
    "demolished": VerbCategory.DESTROY,
}

_PRONOUNS = {"she", "he", "they", "it"}


class _Expr:
    """Linear expression over symbolic unknowns with a rational constant."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: dict[str, Fraction] | None = None, const: Fraction = Fraction(0)):
        self.coeffs = dict(coeffs or {})
        self.const = const

    @classmethod
    def of(cls, value: Fraction | int) -> "_Expr":
        return cls({}, Fraction(value))

    @classmethod
    def symbol(cls, name: str) -> "_Expr":
        return cls({name: Fraction(1)}, Fraction(0))

    def __add__(self, other: "_Expr") -> "_Expr":
        coeffs = dict(self.coeffs)
        for name, c in other.coeffs.items():
            coeffs[name] = coeffs.get(name, Fraction(0)) + c
            if coeffs[name] == 0:
                del coeffs[name]
        return _Expr(coeffs, self.const + other.const)

    def __sub__(self, other: "_Expr") -> "_Expr":
        return self + _Expr({n: -c for n, c in other.coeffs.items()}, -other.const)

    def substitute(self, solution: dict[str, Fraction]) -> "_Expr":
        out = _Expr({}, self.const)
        for name, c in self.coeffs.items():
            if name in solution:
                out.const += c * solution[name]
            else:
                out.coeffs[name] = out.coeffs.get(name, Fraction(0)) + c
        return out


@dataclass
class WorldState:
    """Containers per subject mapping (entity, attribute) to quantities."""

    sentence: str
    containers: dict[str, dict[tuple[str, str], _Expr]] = field(default_factory=dict)


@dataclass
class _Item:
    quantity: _Expr | None  # None means "some": a fresh unknown
    attribute: str
    entity: str


_ITEM = re.compile(
    r"(?P<qty>\d+|some)(?: of (?:her|his|their|its))?(?: (?P<attr>[a-z]+))? (?P<entity>[a-z]+?)(?:s)?(?: left)?$"
)
_QUESTION = re.compile(
    r"^how many(?: (?P<attr>[a-z]+))? (?P<entity>[a-z]+?)(?:s)? (?P<tense>does|did) (?P<subj>[A-Za-z]+) have\?*$",
    re.IGNORECASE,
)


def _parse_items(text: str, entities_seen: set[str]) -> list[_Item]:
    items = []
    for part in text.split(" and "):
        match = _ITEM.match(part.strip())
        if not match:
            raise Unsolvable(f"cannot parse object phrase {part.strip()!r}")
        qty_text = match.group("qty")
        quantity = None if qty_text == "some" else _Expr.of(int(qty_text))
        attr = match.group("attr") or ""
        entity = match.group("entity")
        # an attribute word may itself be a known entity noun ("black pens"
        # vs plain "pens"); keep both readings consistent via the pair key
        items.append(_Item(quantity, attr, entity))
        entities_seen.add(entity)
    return items


class _Solver:
    def __init__(self):
        self.current: dict[tuple[str, str, str], _Expr] = {}
        self.initial: dict[tuple[str, str, str], _Expr] = {}
        self.constraints: list[_Expr] = []  # each must equal zero
        self.last_subject: str | None = None
        self.fresh = 0
        self.states: list[WorldState] = []

    def fresh_symbol(self, prefix: str) -> _Expr:
        self.fresh += 1
        return _Expr.symbol(f"{prefix}{self.fresh}")

    def subject_of(self, word: str) -> str:
        if word.lower() in _PRONOUNS:
            if self.last_subject is None:
                raise Unsolvable("pronoun with no antecedent subject")
            return self.last_subject
        self.last_subject = word
        return word

    def holding(self, subject: str, item: _Item, create_symbol: str | None) -> tuple[str, str, str]:
        key = (subject, item.entity, item.attribute)
        if key not in self.current:
            if create_symbol is None:
                raise Unsolvable(f"{subject} has no known {item.attribute or ''} {item.entity}".replace("  ", " "))
            start = self.fresh_symbol(create_symbol)
            self.current[key] = start
            self.initial[key] = start
        return key

    def quantity_expr(self, item: _Item) -> _Expr:
        if item.quantity is not None:
            return item.quantity
        return self.fresh_symbol("L")

    def apply_sentence(self, sentence: str) -> None:
        text = sentence.strip().rstrip(".").strip()
        if not text:
            return
        words = text.split()
        if len(words) < 3:
            raise Unsolvable(f"cannot parse sentence {sentence!r}")
        subject = self.subject_of(words[0])
        verb = words[1].lower()
        category = VERB_LEXICON.get(verb)
        if category is None:
            raise UnknownVerb(verb)

        rest = " ".join(words[2:]).lower()
        other: str | None = None
        transfer_to = " to " in f" {rest} "
        transfer_from = " from " in f" {rest} "
        if transfer_to or transfer_from:
            rest, other_word = re.split(r" (?:to|from) ", rest, maxsplit=1)
            other = other_word.strip().capitalize() if other_word.strip().lower() not in _PRONOUNS else self.subject_of(other_word.strip())
            # preserve original capitalization when available
            raw_other = sentence.strip().rstrip(".").split()[-1]
            if raw_other.lower() == other.lower():
                other = raw_other

        entities: set[str] = set()
        for item in _parse_items(rest, entities):
            self.apply_item(subject, category, item, other)
        self.states.append(WorldState(sentence, self.snapshot()))

    def snapshot(self) -> dict[str, dict[tuple[str, str], _Expr]]:
        out: dict[str, dict[tuple[str, str], _Expr]] = {}
        for (subject, entity, attr), expr in self.current.items():
            out.setdefault(subject, {})[(entity, attr)] = expr
        return out

    def apply_item(self, subject: str, category: VerbCategory, item: _Item, other: str | None) -> None:
        if category == VerbCategory.OBSERVATION:
            key = (subject, item.entity, item.attribute)
            value = self.quantity_expr(item)
            if key in self.current:
                self.constraints.append(self.current[key] - value)
            else:
                self.current[key] = value
                self.initial[key] = value
            return

        amount = self.quantity_expr(item)
        if category in (VerbCategory.POSITIVE, VerbCategory.NEGATIVE):
            key = self.holding(subject, item, create_symbol="X")
            sign = 1 if category == VerbCategory.POSITIVE else -1
            self.current[key] = self.current[key] + amount if sign > 0 else self.current[key] - amount
            return

        if category in (VerbCategory.POSITIVE_TRANSFER, VerbCategory.NEGATIVE_TRANSFER):
            if other is None:
                # transfer verb without a named counterpart: treat as one-sided
                key = self.holding(subject, item, create_symbol="X")
                if category == VerbCategory.POSITIVE_TRANSFER:
                    self.current[key] = self.current[key] + amount
                else:
                    self.current[key] = self.current[key] - amount
                return
            giver, taker = (
                (subject, other)
                if category == VerbCategory.NEGATIVE_TRANSFER
                else (other, subject)
            )
            giver_key = self.holding(giver, item, create_symbol="X")
            taker_key = self.holding(taker, item, create_symbol="X")
            self.current[giver_key] = self.current[giver_key] - amount
            self.current[taker_key] = self.current[taker_key] + amount
            return

        # construct/destroy adjust every involved container
        sign = 1 if category == VerbCategory.CONSTRUCT else -1
        subjects = [subject] + ([other] if other else [])
        for who in subjects:
            key = self.holding(who, item, create_symbol="X")
            self.current[key] = (
                self.current[key] + amount if sign > 0 else self.current[key] - amount
            )

    # -- solving ------------------------------------------------------------

    def solve_unknowns(self) -> dict[str, Fraction]:
        equations = [(_dictcopy(c.coeffs), -c.const) for c in self.constraints]
        solution: dict[str, Fraction] = {}
        changed = True
        while changed:
            changed = False
            for coeffs, rhs in equations:
                for name in list(coeffs):
                    if name in solution:
                        rhs -= coeffs.pop(name) * solution[name]
                live = {n: c for n, c in coeffs.items() if c != 0}
                if len(live) == 1:
                    (name, coeff), = live.items()
                    solution[name] = rhs / coeff
                    equations = [
                        (c, r) for c, r in equations if not (len(c) == 1 and name in c)
                    ]
                    changed = True
                    break
                if not live and rhs != 0:
                    raise Unsolvable("inconsistent observations")
        return solution

    def answer(self, question: str) -> Fraction:
        match = _QUESTION.match(question.strip())
        if not match:
            raise Unsolvable(f"cannot parse question {question!r}")
        subject = match.group("subj")
        entity = match.group("entity").lower()
        attr = (match.group("attr") or "").lower()
        table = self.initial if match.group("tense").lower() == "did" else self.current
        key = (subject, entity, attr)
        if key not in table:
            raise Unsolvable(f"nothing known about {subject}'s {entity}")
        solution = self.solve_unknowns()
        value = table[key].substitute(solution)
        if value.coeffs:
            raise Unsolvable(f"under-constrained: {sorted(value.coeffs)}")
        return value.const


def _dictcopy(d: dict[str, Fraction]) -> dict[str, Fraction]:
    return dict(d)


def aris_solve(script: list[str], question: str) -> int | float:
    """Solve a transfer word problem given as controlled sentences."""
    solver = _Solver()
    for sentence in script:
        solver.apply_sentence(sentence)
    value = solver.answer(question)
    return int(value) if value.denominator == 1 else float(value)
