"""mathfind: math-aware formula search and retrieval evaluation."""

__version__ = "0.1.0"
