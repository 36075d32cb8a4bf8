"""Synthetic 2-D layout for layout-tree symbols.

Retrieval by region occupancy needs symbol geometry, which LaTeX sources
do not carry, so boxes are synthesized from the layout tree with fixed
rules: unit advance along the writing line, scripts shifted ±0.4 of the
base height at 0.7 scale, fraction numerator/denominator stacked above and
below the bar, big-operator limits stacked likewise, and container/radical
contents nested inside a 0.1 margin. All geometry flows through this one
function; the resulting boxes are normalized to the unit square.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..formula.trees import SltNode, SltTree, SpatialRelation

SCRIPT_SHIFT = 0.4
SCRIPT_SCALE = 0.7
INSET = 0.1


@dataclass(frozen=True)
class SymbolBox:
    """A symbol label with its normalized (x0, y0, x1, y1) bounding box."""

    label: str
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate box for {self.label!r}")

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)


@dataclass
class _Box:
    label: str
    x0: float
    y0: float
    x1: float
    y1: float

    def shift(self, dx: float, dy: float) -> None:
        self.x0 += dx
        self.x1 += dx
        self.y0 += dy
        self.y1 += dy


def layout_symbols(slt: SltTree) -> list[SymbolBox]:
    """Deterministic box per symbol, normalized to the unit square."""
    boxes: list[_Box] = []
    _lay_line(slt.root, 0.0, 0.0, 1.0, boxes)
    if not boxes:
        return []
    min_x = min(b.x0 for b in boxes)
    max_x = max(b.x1 for b in boxes)
    min_y = min(b.y0 for b in boxes)
    max_y = max(b.y1 for b in boxes)
    span_x = max(max_x - min_x, 1e-9)
    span_y = max(max_y - min_y, 1e-9)
    return [
        SymbolBox(
            b.label,
            (b.x0 - min_x) / span_x,
            (b.y0 - min_y) / span_y,
            (b.x1 - min_x) / span_x,
            (b.y1 - min_y) / span_y,
        )
        for b in boxes
    ]


def _lay_line(first: SltNode | None, x: float, baseline: float, scale: float, boxes: list[_Box]) -> float:
    """Lay out one writing line; returns the x position after its last box."""
    node = first
    while node is not None:
        x = _lay_node(node, x, baseline, scale, boxes)
        node = node.children.get(SpatialRelation.NEXT)
    return x


def _measure_line(first: SltNode | None, scale: float) -> tuple[list[_Box], float]:
    scratch: list[_Box] = []
    width = _lay_line(first, 0.0, 0.0, scale, scratch)
    return scratch, width


def _lay_node(node: SltNode, x: float, baseline: float, scale: float, boxes: list[_Box]) -> float:
    label = node.label
    children = node.children

    if label == "frac":
        num_boxes, num_w = _measure_line(children.get(SpatialRelation.ABOVE), scale)
        den_boxes, den_w = _measure_line(children.get(SpatialRelation.BELOW), scale)
        width = max(num_w, den_w, scale)
        bar = _Box(label, x, baseline - 0.05 * scale, x + width, baseline + 0.05 * scale)
        boxes.append(bar)
        _append_shifted(boxes, num_boxes, x + (width - num_w) / 2, baseline + 0.65 * scale)
        _append_shifted(boxes, den_boxes, x + (width - den_w) / 2, baseline - 0.65 * scale)
        end = x + width
    elif label == "sqrt" or node.kind.value == "C":
        inner_boxes, inner_w = _measure_line(children.get(SpatialRelation.INSIDE), scale)
        width = inner_w + 2 * INSET * scale if inner_boxes else scale
        boxes.append(_Box(label, x, baseline - scale / 2, x + width, baseline + scale / 2))
        _append_shifted(boxes, inner_boxes, x + INSET * scale, baseline)
        end = x + width
    elif label in ("sum", "int", "prod") and node.kind.value == "F":
        boxes.append(_Box(label, x, baseline - scale / 2, x + scale, baseline + scale / 2))
        lower_boxes, lower_w = _measure_line(children.get(SpatialRelation.BELOW), SCRIPT_SCALE * scale)
        upper_boxes, upper_w = _measure_line(children.get(SpatialRelation.ABOVE), SCRIPT_SCALE * scale)
        _append_shifted(boxes, lower_boxes, x + (scale - lower_w) / 2, baseline - scale)
        _append_shifted(boxes, upper_boxes, x + (scale - upper_w) / 2, baseline + scale)
        end = x + scale
    else:
        boxes.append(_Box(label, x, baseline - scale / 2, x + scale, baseline + scale / 2))
        end = x + scale

    script_scale = SCRIPT_SCALE * scale
    script_end = end
    if SpatialRelation.SUP in children:
        script_end = max(
            script_end,
            _lay_line(children[SpatialRelation.SUP], end, baseline + SCRIPT_SHIFT * scale, script_scale, boxes),
        )
    if SpatialRelation.SUB in children:
        script_end = max(
            script_end,
            _lay_line(children[SpatialRelation.SUB], end, baseline - SCRIPT_SHIFT * scale, script_scale, boxes),
        )
    pre_start = x
    for rel, dy in ((SpatialRelation.PRESUP, SCRIPT_SHIFT), (SpatialRelation.PRESUB, -SCRIPT_SHIFT)):
        if rel in children:
            pre_boxes, pre_w = _measure_line(children[rel], script_scale)
            _append_shifted(boxes, pre_boxes, pre_start - pre_w, baseline + dy * scale)
    return script_end


def _append_shifted(boxes: list[_Box], extra: list[_Box], dx: float, dy: float) -> None:
    for box in extra:
        box.shift(dx, dy)
        boxes.append(box)
