"""Visual-spatial retrieval: cosine ranking, autocompletion, entry orders.

The store is immutable once built and persists to ``phoc.bin``
(little-endian, magic ``MFPH1``): region count, then per formula its doc
id, formula id, per-label symbol counts, and per-label region bitsets.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..errors import IndexFormatError
from ..formula.trees import SltTree
from .encode import DEFAULT_SCHEME, PhocVector, RegionScheme, cosine, phoc_encode
from .layout import SymbolBox, layout_symbols

MAGIC = b"MFPH1"


@dataclass(frozen=True)
class PhocEntry:
    doc_id: str
    formula_id: str
    vector: PhocVector
    label_counts: tuple[tuple[str, int], ...]

    def counts(self) -> dict[str, int]:
        return dict(self.label_counts)


def make_entry(doc_id: str, formula_id: str, slt: SltTree, scheme: RegionScheme) -> PhocEntry:
    boxes = layout_symbols(slt)
    counts = Counter(box.label for box in boxes)
    return PhocEntry(doc_id, formula_id, phoc_encode(boxes, scheme), tuple(sorted(counts.items())))


class PhocStore:
    def __init__(self, scheme: RegionScheme = DEFAULT_SCHEME):
        self.scheme = scheme
        self.entries: list[PhocEntry] = []

    def add(self, doc_id: str, formula_id: str, slt: SltTree) -> None:
        self.entries.append(make_entry(doc_id, formula_id, slt, self.scheme))

    def finalize(self) -> None:
        self.entries.sort(key=lambda e: (e.doc_id, e.formula_id))


@dataclass(frozen=True)
class PhocHit:
    doc_id: str
    formula_id: str
    score: float


def phoc_search(query: PhocVector, store: PhocStore, k: int) -> list[PhocHit]:
    """Rank stored formulas by cosine to the query descriptor."""
    hits = [
        PhocHit(e.doc_id, e.formula_id, cosine(query, e.vector))
        for e in store.entries
    ]
    hits = [h for h in hits if h.score > 0.0]
    hits.sort(key=lambda h: (-h.score, h.doc_id, h.formula_id))
    return hits[:k]


def autocomplete(partial_symbols: list[SymbolBox], store: PhocStore, k: int) -> list[PhocHit]:
    """Order-free completion: conjunctive symbol filter, then cosine.

    A candidate survives only if it contains every entered symbol label
    with at least the entered multiplicity, and has no fewer symbols than
    the query.
    """
    if not partial_symbols:
        raise ValueError("autocomplete needs at least one entered symbol")
    query_vector = phoc_encode(partial_symbols, store.scheme)
    query_counts = Counter(box.label for box in partial_symbols)
    survivors = []
    for entry in store.entries:
        if entry.vector.symbol_count < len(partial_symbols):
            continue
        counts = entry.counts()
        if any(counts.get(label, 0) < n for label, n in query_counts.items()):
            continue
        survivors.append(PhocHit(entry.doc_id, entry.formula_id, cosine(query_vector, entry.vector)))
    survivors.sort(key=lambda h: (-h.score, h.doc_id, h.formula_id))
    return survivors[:k]


class EntryOrder(Enum):
    LEFT_RIGHT = "left_right"
    RIGHT_LEFT = "right_left"
    OUTSIDE_IN = "outside_in"
    MIDDLE_OUT = "middle_out"


def entry_order(symbols: list[SymbolBox], order: EntryOrder) -> list[SymbolBox]:
    """Symbol entry sequence for autocompletion simulations."""
    by_x = sorted(symbols, key=lambda b: (b.center[0], b.center[1], b.label))
    n = len(by_x)
    if order == EntryOrder.LEFT_RIGHT:
        return by_x
    if order == EntryOrder.RIGHT_LEFT:
        return list(reversed(by_x))
    if order == EntryOrder.OUTSIDE_IN:
        out = []
        lo, hi = 0, n - 1
        while lo <= hi:
            out.append(by_x[lo])
            if hi != lo:
                out.append(by_x[hi])
            lo += 1
            hi -= 1
        return out
    # middle-out, left neighbor first on ties
    mid = (n - 1) // 2
    out = [by_x[mid]] if n else []
    for dist in range(1, n):
        if mid - dist >= 0:
            out.append(by_x[mid - dist])
        if mid + dist < n:
            out.append(by_x[mid + dist])
    return out


# -- persistence -------------------------------------------------------------


def save_phoc(store: PhocStore, path: str | Path) -> None:
    out = bytearray(MAGIC)
    out += struct.pack("<I", store.scheme.region_count())
    out += struct.pack("<I", len(store.entries))
    for entry in store.entries:
        _write_str(out, entry.doc_id)
        _write_str(out, entry.formula_id)
        out += struct.pack("<I", entry.vector.symbol_count)
        out += struct.pack("<I", len(entry.label_counts))
        for label, count in entry.label_counts:
            _write_str(out, label)
            out += struct.pack("<I", count)
        out += struct.pack("<I", len(entry.vector.bits))
        for label, bits in entry.vector.bits:
            _write_str(out, label)
            _write_bits(out, bits)
    Path(path).write_bytes(bytes(out))


def load_phoc(path: str | Path, scheme: RegionScheme = DEFAULT_SCHEME) -> PhocStore:
    data = Path(path).read_bytes()
    if data[: len(MAGIC)] != MAGIC:
        raise IndexFormatError("bad phoc magic")
    pos = len(MAGIC)
    region_count, n_entries = struct.unpack_from("<II", data, pos)
    pos += 8
    if region_count != scheme.region_count():
        raise IndexFormatError("phoc region scheme mismatch")
    store = PhocStore(scheme)
    for _ in range(n_entries):
        doc_id, pos = _read_str(data, pos)
        formula_id, pos = _read_str(data, pos)
        (symbol_count,) = struct.unpack_from("<I", data, pos)
        pos += 4
        (n_counts,) = struct.unpack_from("<I", data, pos)
        pos += 4
        label_counts = []
        for _ in range(n_counts):
            label, pos = _read_str(data, pos)
            (count,) = struct.unpack_from("<I", data, pos)
            pos += 4
            label_counts.append((label, count))
        (n_labels,) = struct.unpack_from("<I", data, pos)
        pos += 4
        bits = []
        for _ in range(n_labels):
            label, pos = _read_str(data, pos)
            value, pos = _read_bits(data, pos)
            bits.append((label, value))
        store.entries.append(
            PhocEntry(doc_id, formula_id, PhocVector(tuple(bits), symbol_count, region_count), tuple(label_counts))
        )
    return store


def _write_str(out: bytearray, value: str) -> None:
    raw = value.encode("utf-8")
    out += struct.pack("<I", len(raw))
    out += raw


def _read_str(data: bytes, pos: int) -> tuple[str, int]:
    (length,) = struct.unpack_from("<I", data, pos)
    pos += 4
    return data[pos:pos + length].decode("utf-8"), pos + length


def _write_bits(out: bytearray, bits: int) -> None:
    raw = bits.to_bytes((bits.bit_length() + 7) // 8 or 1, "little")
    out += struct.pack("<I", len(raw))
    out += raw


def _read_bits(data: bytes, pos: int) -> tuple[int, int]:
    (length,) = struct.unpack_from("<I", data, pos)
    pos += 4
    return int.from_bytes(data[pos:pos + length], "little"), pos + length
