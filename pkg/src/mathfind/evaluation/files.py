"""TREC-format qrels and run files.

Qrels lines are ``topic 0 item grade``; run lines are
``topic Q0 item rank score tag``. Parsing is strict: malformed lines,
duplicate (topic, item) pairs, and non-contiguous ranks raise
:class:`FormatError` with the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..errors import FormatError


@dataclass
class Qrels:
    """Graded relevance judgments keyed by (topic, item)."""

    grades: dict[tuple[str, str], int] = field(default_factory=dict)

    def topics(self) -> list[str]:
        return sorted({topic for topic, _ in self.grades})

    def for_topic(self, topic: str) -> dict[str, int]:
        return {item: g for (t, item), g in self.grades.items() if t == topic}

    def relevant(self, topic: str, threshold: int = 1) -> set[str]:
        return {item for item, g in self.for_topic(topic).items() if g >= threshold}

    def judged_nonrelevant(self, topic: str, threshold: int = 1) -> set[str]:
        return {item for item, g in self.for_topic(topic).items() if g < threshold}


@dataclass(frozen=True)
class GradeScale:
    """Judgment scale with the binarization threshold (grade >= threshold
    counts as relevant). The default is the 0-3 scale binarized at 2,
    i.e. high+medium relevant."""

    max_grade: int = 3
    threshold: int = 2

    def __post_init__(self):
        if not 0 <= self.threshold <= self.max_grade:
            raise ValueError("threshold must lie within the grade scale")


def binarize(qrels: Qrels, scale: GradeScale = GradeScale()) -> Qrels:
    return Qrels({key: (1 if g >= scale.threshold else 0) for key, g in qrels.grades.items()})


@dataclass
class RunRanking:
    """Per-topic ranked items with scores, plus the run tag."""

    topics: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    tag: str = ""

    def items_for(self, topic: str) -> list[str]:
        return [item for item, _ in self.topics.get(topic, [])]

    def topic_ids(self) -> list[str]:
        return sorted(self.topics)


def parse_qrels(path: str | Path) -> Qrels:
    qrels = Qrels()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        fields = raw.split()
        if len(fields) != 4:
            raise FormatError(f"expected 4 fields, got {len(fields)}", lineno)
        topic, _, item, grade = fields
        try:
            value = int(grade)
        except ValueError:
            raise FormatError(f"bad grade {grade!r}", lineno) from None
        if value < 0:
            raise FormatError(f"negative grade {grade!r}", lineno)
        if (topic, item) in qrels.grades:
            raise FormatError(f"duplicate judgment for {topic}/{item}", lineno)
        qrels.grades[(topic, item)] = value
    return qrels


def parse_run(path: str | Path) -> RunRanking:
    rows: dict[str, list[tuple[int, str, float]]] = {}
    tag = ""
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        fields = raw.split()
        if len(fields) != 6:
            raise FormatError(f"expected 6 fields, got {len(fields)}", lineno)
        topic, _, item, rank, score, run_tag = fields
        try:
            rank_value = int(rank)
            score_value = float(score)
        except ValueError:
            raise FormatError("bad rank or score", lineno) from None
        if (topic, item) in seen:
            raise FormatError(f"duplicate item {item} in topic {topic}", lineno)
        seen.add((topic, item))
        rows.setdefault(topic, []).append((rank_value, item, score_value))
        tag = run_tag
    run = RunRanking(tag=tag)
    for topic, entries in rows.items():
        entries.sort()
        ranks = [rank for rank, _, _ in entries]
        if ranks != list(range(1, len(ranks) + 1)):
            raise FormatError(f"ranks for topic {topic} are not contiguous from 1", 0)
        run.topics[topic] = [(item, score) for _, item, score in entries]
    return run


def write_run(run: RunRanking, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for topic in run.topic_ids():
            for rank, (item, score) in enumerate(run.topics[topic], start=1):
                fh.write(f"{topic} Q0 {item} {rank} {score:.6f} {run.tag}\n")
