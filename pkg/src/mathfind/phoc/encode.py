"""Region-occupancy encoding of symbol layouts.

A region scheme partitions the formula's unit bounding box at several
granularity levels. Level 1 is the whole box; with axis splits, level L
contributes L equal vertical strips per horizontal orientation and L equal
horizontal bands per vertical orientation; with concentric rectangles,
level L contributes L nested centered rings. The default scheme (levels
1..5, both orientations, axis splits) yields 1 + 2·(2+3+4+5) = 29 regions.

A symbol occupies the region containing its box center; centers exactly on
a boundary belong to the lower-indexed region. Each distinct symbol label
carries one bitset over the regions, and a formula's descriptor is the
bag of those per-symbol bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .layout import SymbolBox


class Orientation(Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class RegionVariant(Enum):
    AXIS_SPLITS = "axis_splits"
    CONCENTRIC_RECTANGLES = "concentric_rectangles"


@dataclass(frozen=True)
class RegionScheme:
    levels: tuple[int, ...] = (1, 2, 3, 4, 5)
    orientations: tuple[Orientation, ...] = (Orientation.HORIZONTAL, Orientation.VERTICAL)
    variant: RegionVariant = RegionVariant.AXIS_SPLITS

    def __post_init__(self):
        if not self.levels or any(l < 1 for l in self.levels):
            raise ValueError("levels must be positive")
        if self.variant == RegionVariant.AXIS_SPLITS and not self.orientations:
            raise ValueError("axis splits need at least one orientation")

    def region_count(self) -> int:
        total = 0
        for level in self.levels:
            if level == 1 or self.variant == RegionVariant.CONCENTRIC_RECTANGLES:
                total += level
            else:
                total += level * len(self.orientations)
        return total

    def partition_groups(self) -> list[tuple[int, ...]]:
        """Region indices per (level, orientation) partition; each partition
        tiles the unit box, so every center lands in exactly one cell."""
        groups: list[tuple[int, ...]] = []
        base = 0
        for level in self.levels:
            if level == 1 or self.variant == RegionVariant.CONCENTRIC_RECTANGLES:
                groups.append(tuple(range(base, base + level)))
                base += level
            else:
                for _ in self.orientations:
                    groups.append(tuple(range(base, base + level)))
                    base += level
        return groups


DEFAULT_SCHEME = RegionScheme()


@dataclass(frozen=True)
class PhocVector:
    """Per-symbol-label region bitsets plus the total symbol count."""

    bits: tuple[tuple[str, int], ...]
    symbol_count: int
    scheme_regions: int

    def as_dict(self) -> dict[str, int]:
        return dict(self.bits)

    def labels(self) -> list[str]:
        return [label for label, _ in self.bits]


def _cell_index(value: float, cells: int) -> int:
    scaled = value * cells
    idx = int(scaled)
    if scaled == idx and idx > 0:
        idx -= 1  # boundary ties go to the lower-indexed cell
    return min(idx, cells - 1)


def _region_bits(cx: float, cy: float, scheme: RegionScheme) -> int:
    bits = 0
    base = 0
    for level in scheme.levels:
        if scheme.variant == RegionVariant.CONCENTRIC_RECTANGLES:
            if level == 1:
                bits |= 1 << base
                base += 1
            else:
                radius = max(abs(cx - 0.5), abs(cy - 0.5)) * 2
                bits |= 1 << (base + _cell_index(radius, level))
                base += level
            continue
        if level == 1:
            bits |= 1 << base
            base += 1
            continue
        for orientation in scheme.orientations:
            value = cx if orientation == Orientation.HORIZONTAL else cy
            bits |= 1 << (base + _cell_index(value, level))
            base += level
    return bits


def phoc_encode(symbols: list[SymbolBox], scheme: RegionScheme = DEFAULT_SCHEME) -> PhocVector:
    """Encode symbol boxes as per-label region-occupancy bitsets."""
    by_label: dict[str, int] = {}
    for box in symbols:
        cx, cy = box.center
        by_label[box.label] = by_label.get(box.label, 0) | _region_bits(cx, cy, scheme)
    bits = tuple(sorted(by_label.items()))
    return PhocVector(bits, len(symbols), scheme.region_count())


def cosine(a: PhocVector, b: PhocVector) -> float:
    """Cosine over the concatenated binary vectors of both descriptors."""
    a_bits = a.as_dict()
    b_bits = b.as_dict()
    dot = sum((bits & b_bits.get(label, 0)).bit_count() for label, bits in a_bits.items())
    norm_a = sum(bits.bit_count() for bits in a_bits.values()) ** 0.5
    norm_b = sum(bits.bit_count() for bits in b_bits.values()) ** 0.5
    if norm_a == 0 or norm_b == 0:
        return 0.0
    return dot / (norm_a * norm_b)
