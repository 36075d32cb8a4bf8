"""Exception types shared across mathfind modules."""


class MathfindError(Exception):
    """Base class for all library errors."""


class ParseError(MathfindError):
    """Raised on unsupported or malformed formula input.

    Carries the byte offset of the offending token in the source string.
    """

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class TranslateError(MathfindError):
    """Raised when a layout tree pattern has no operator mapping."""


class DuplicateDocId(MathfindError):
    """Raised when two documents in one collection share an id."""


class UnknownTerm(MathfindError):
    """Raised when a term is absent from the index vocabulary."""


class EmptyQuery(MathfindError):
    """Raised when a search is issued with no query terms."""


class IndexFormatError(MathfindError):
    """Raised when a persisted index file has a bad magic or layout."""


class FormatError(MathfindError):
    """Raised on malformed qrels/run lines; carries the line number."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"{message} (line {line})")
        self.line = line


class MalformedSequence(MathfindError):
    """Raised on stack underflow or leftover operands in traversal eval."""


class UnknownVerb(MathfindError):
    """Raised when a word-problem sentence uses a verb outside the lexicon."""


class Unsolvable(MathfindError):
    """Raised when a word problem is under-constrained or inconsistent."""


class EquationError(MathfindError):
    """Raised for non-linear or degenerate equations in the linear solver."""


class EvaluationError(MathfindError):
    """Raised on bad expression evaluation (division by zero, free token)."""
