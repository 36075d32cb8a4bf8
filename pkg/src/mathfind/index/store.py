"""Index persistence.

An index directory holds four files, all versioned with the ``MFIDX1``
magic:

* ``vocab.tsv``    term-id TAB term
* ``postings.bin`` magic, then per term: term-id, entry count, and
  delta-encoded varint entries (doc-index delta, formula-index + 1 with 0
  meaning a document-level posting, term frequency)
* ``docs.tsv``     doc-id TAB text-token-count TAB JSON payload (text plus
  stored formulas with their per-family term totals)
* ``stats.tsv``    magic, document count, average length, extractor config
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import IndexFormatError
from .build import ExtractorConfig, InvertedIndex, StoredFormula

MAGIC = b"MFIDX1"


def write_varint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varints are unsigned")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def read_varint(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise IndexFormatError("truncated varint")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7


def save_index(index: InvertedIndex, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    with open(directory / "vocab.tsv", "w", encoding="utf-8") as fh:
        for tid, term in enumerate(index.terms):
            fh.write(f"{tid}\t{term}\n")

    blob = bytearray(MAGIC)
    write_varint(blob, len(index.postings))
    for tid, plist in enumerate(index.postings):
        write_varint(blob, tid)
        write_varint(blob, len(plist))
        prev_doc = 0
        for doc_idx, form_idx, tf in plist:
            write_varint(blob, doc_idx - prev_doc)
            prev_doc = doc_idx
            write_varint(blob, form_idx + 1)
            write_varint(blob, tf)
    (directory / "postings.bin").write_bytes(bytes(blob))

    with open(directory / "docs.tsv", "w", encoding="utf-8") as fh:
        for doc_idx, doc_id in enumerate(index.doc_ids):
            payload = {
                "text": index.doc_text[doc_idx],
                "formulas": [
                    {
                        "id": f.formula_id,
                        "latex": f.latex,
                        "visual_id": f.visual_id,
                        "totals": f.family_totals,
                    }
                    for f in index.doc_formulas[doc_idx]
                ],
            }
            fh.write(f"{doc_id}\t{index.doc_len[doc_idx]}\t{json.dumps(payload, sort_keys=True)}\n")

    with open(directory / "stats.tsv", "w", encoding="utf-8") as fh:
        fh.write("magic\tMFIDX1\n")
        fh.write(f"docs\t{index.n_docs}\n")
        fh.write(f"avg_len\t{index.avg_doc_len!r}\n")
        fh.write(f"config\t{index.config.to_json()}\n")


def load_index(directory: str | Path) -> InvertedIndex:
    directory = Path(directory)
    stats_path = directory / "stats.tsv"
    if not stats_path.exists():
        raise IndexFormatError(f"no index at {directory}")
    stats = dict(
        line.rstrip("\n").split("\t", 1)
        for line in stats_path.read_text(encoding="utf-8").splitlines()
        if line
    )
    if stats.get("magic") != "MFIDX1":
        raise IndexFormatError("bad stats magic")

    index = InvertedIndex()
    index.config = ExtractorConfig.from_json(stats["config"])

    for line in (directory / "docs.tsv").read_text(encoding="utf-8").splitlines():
        doc_id, doc_len, raw = line.split("\t", 2)
        payload = json.loads(raw)
        index.doc_ids.append(doc_id)
        index.doc_len.append(int(doc_len))
        index.doc_text.append(payload["text"])
        index.doc_formulas.append(
            [
                StoredFormula(f["id"], f["latex"], f["visual_id"], f["totals"])
                for f in payload["formulas"]
            ]
        )

    for line in (directory / "vocab.tsv").read_text(encoding="utf-8").splitlines():
        tid, term = line.split("\t", 1)
        assert int(tid) == len(index.terms)
        index.terms.append(term)
    index.vocab = {term: tid for tid, term in enumerate(index.terms)}

    data = (directory / "postings.bin").read_bytes()
    if data[: len(MAGIC)] != MAGIC:
        raise IndexFormatError("bad postings magic")
    pos = len(MAGIC)
    n_terms, pos = read_varint(data, pos)
    if n_terms != len(index.terms):
        raise IndexFormatError("postings/vocab term count mismatch")
    index.postings = [[] for _ in range(n_terms)]
    index.doc_freq = [0] * n_terms
    for _ in range(n_terms):
        tid, pos = read_varint(data, pos)
        count, pos = read_varint(data, pos)
        plist = []
        doc_idx = 0
        for _ in range(count):
            delta, pos = read_varint(data, pos)
            doc_idx += delta
            form_plus1, pos = read_varint(data, pos)
            tf, pos = read_varint(data, pos)
            plist.append((doc_idx, form_plus1 - 1, tf))
        index.postings[tid] = plist
        index.doc_freq[tid] = len({doc for doc, _, _ in plist})
    index.finalize()
    return index
