"""Deterministic scene-graph layout in world coordinates.

World space is y-down to match the output coordinate system.  Layers sit
left to right at x = index * layer_spacing; each layer's elements are
centered vertically on y = 0.  Element ids follow a fixed grammar:

    L{i}/n{j}      neuron j of fully-connected layer i
    L{i}/fm{k}     feature map k of a conv or pooling layer i
    L{i}/img       the pixel grid of an image layer i
    E{i}-{j}/{a}-{b}   edge from element a of layer i to element b of layer j

Emission order is pinned: all layer elements (layers left to right,
elements top to bottom), then all edges (pairs left to right, endpoint
ordinals lexicographic).  Draw order sorts by (z, emission index): edges
z=0 under nodes z=1; overlays added at sampling time draw above both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import EmptyScene
from .model import Color, KIND_CONV2D, KIND_FF, KIND_IMAGE, KIND_MAXPOOL2D
from .validate import ResolvedLayer, ValidatedNetwork


@dataclass(frozen=True)
class LayoutConfig:
    layer_spacing: float = 2.0
    node_spacing: float = 0.6
    neuron_radius: float = 0.2
    fm_cell: float = 0.12
    fm_gap: float = 0.3
    margin: float = 0.5
    # Stroke and overlay geometry.
    neuron_stroke_width: float = 0.03
    edge_width: float = 0.02
    cell_stroke_width: float = 0.008
    pulse_radius: float = 0.05
    highlight_stroke_width: float = 0.03
    # Tall map stacks switch to an overlapped diagonal arrangement.
    map_overlap_limit: float = 4.0
    map_overlap_step: float = 0.12


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float


@dataclass(frozen=True)
class Segment:
    x0: float
    y0: float
    x1: float
    y1: float


@dataclass(frozen=True)
class CellGrid:
    """rows x cols square cells; origin is the top-left corner."""

    x: float
    y: float
    cell: float
    rows: int
    cols: int
    values: Optional[tuple[float, ...]] = None


Shape = Union[Circle, Rect, Segment, CellGrid]


@dataclass(frozen=True)
class BaseStyle:
    fill: Color
    stroke: Color
    stroke_width: float = 0.0
    opacity: float = 1.0


@dataclass(frozen=True)
class Primitive:
    id: str
    shape: Shape
    style: BaseStyle
    z: int


@dataclass(frozen=True)
class Box:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y


def shape_bounds(shape: Shape, stroke_width: float = 0.0) -> Box:
    """Axis-aligned bounds including half the stroke width."""
    h = stroke_width / 2.0
    if isinstance(shape, Circle):
        r = shape.r + h
        return Box(shape.cx - r, shape.cy - r, shape.cx + r, shape.cy + r)
    if isinstance(shape, Rect):
        return Box(shape.x0 - h, shape.y0 - h, shape.x1 + h, shape.y1 + h)
    if isinstance(shape, Segment):
        x0, x1 = sorted((shape.x0, shape.x1))
        y0, y1 = sorted((shape.y0, shape.y1))
        return Box(x0 - h, y0 - h, x1 + h, y1 + h)
    if isinstance(shape, CellGrid):
        return Box(
            shape.x - h,
            shape.y - h,
            shape.x + shape.cols * shape.cell + h,
            shape.y + shape.rows * shape.cell + h,
        )
    raise TypeError(f"unknown shape {type(shape).__name__}")


def shape_center(shape: Shape) -> tuple[float, float]:
    if isinstance(shape, Circle):
        return (shape.cx, shape.cy)
    if isinstance(shape, Rect):
        return ((shape.x0 + shape.x1) / 2.0, (shape.y0 + shape.y1) / 2.0)
    if isinstance(shape, Segment):
        return ((shape.x0 + shape.x1) / 2.0, (shape.y0 + shape.y1) / 2.0)
    if isinstance(shape, CellGrid):
        return (
            shape.x + shape.cols * shape.cell / 2.0,
            shape.y + shape.rows * shape.cell / 2.0,
        )
    raise TypeError(f"unknown shape {type(shape).__name__}")


@dataclass(frozen=True)
class SceneGraph:
    primitives: tuple[Primitive, ...]
    view_box: Box
    # Element ids per layer index, in emission order.
    layer_elements: dict[int, tuple[str, ...]] = field(default_factory=dict)
    # Edge ids per adjacent pair (i, i+1), in emission order.
    pair_edges: dict[tuple[int, int], tuple[str, ...]] = field(default_factory=dict)
    config: LayoutConfig = LayoutConfig()

    def __post_init__(self):
        object.__setattr__(
            self, "_by_id", {p.id: p for p in self.primitives}
        )

    def get(self, prim_id: str) -> Primitive:
        return self._by_id[prim_id]

    def has(self, prim_id: str) -> bool:
        return prim_id in self._by_id

    def element_center(self, prim_id: str) -> tuple[float, float]:
        return shape_center(self.get(prim_id).shape)


def fit_view(primitives: tuple[Primitive, ...], margin: float) -> Box:
    """Union of stroke-inclusive bounds, expanded by margin on all sides."""
    if not primitives:
        raise EmptyScene()
    boxes = [shape_bounds(p.shape, p.style.stroke_width) for p in primitives]
    return Box(
        min(b.min_x for b in boxes) - margin,
        min(b.min_y for b in boxes) - margin,
        max(b.max_x for b in boxes) + margin,
        max(b.max_y for b in boxes) + margin,
    )


# ---------------------------------------------------------------------------
# Per-layer geometry.
# ---------------------------------------------------------------------------

def _grid_stack_geometry(
    r: ResolvedLayer, cfg: LayoutConfig
) -> tuple[float, float, float, bool]:
    """(world side, total width, total height, overlapped) of a map stack."""
    side = r.grid_rows * cfg.fm_cell
    m = r.map_count
    stacked_h = m * side + (m - 1) * cfg.fm_gap
    if stacked_h > cfg.map_overlap_limit and m > 1:
        step = cfg.map_overlap_step
        return side, side + (m - 1) * step, side + (m - 1) * step, True
    return side, side, stacked_h, False


def layer_extent(r: ResolvedLayer, cfg: LayoutConfig) -> tuple[float, float]:
    """Width and height the layer's elements occupy, ignoring strokes."""
    if r.kind == KIND_FF:
        n = r.map_count
        return (
            2 * cfg.neuron_radius,
            (n - 1) * cfg.node_spacing + 2 * cfg.neuron_radius,
        )
    if r.kind == KIND_IMAGE:
        return (r.grid_cols * cfg.fm_cell, r.grid_rows * cfg.fm_cell)
    _, w, h, _ = _grid_stack_geometry(r, cfg)
    return (w, h)


def _layer_primitives(
    r: ResolvedLayer, x: float, cfg: LayoutConfig, net: ValidatedNetwork
) -> list[Primitive]:
    style = net.style
    prims: list[Primitive] = []
    if r.kind == KIND_FF:
        n = r.map_count
        for j in range(n):
            cy = (j - (n - 1) / 2.0) * cfg.node_spacing
            prims.append(
                Primitive(
                    id=f"L{r.index}/n{j}",
                    shape=Circle(x, cy, cfg.neuron_radius),
                    style=BaseStyle(
                        fill=style.neuron_fill,
                        stroke=style.neuron_stroke,
                        stroke_width=cfg.neuron_stroke_width,
                    ),
                    z=1,
                )
            )
        return prims
    if r.kind == KIND_IMAGE:
        w = r.grid_cols * cfg.fm_cell
        h = r.grid_rows * cfg.fm_cell
        prims.append(
            Primitive(
                id=f"L{r.index}/img",
                shape=CellGrid(
                    x - w / 2.0,
                    -h / 2.0,
                    cfg.fm_cell,
                    r.grid_rows,
                    r.grid_cols,
                    values=r.pixels,
                ),
                style=BaseStyle(
                    fill=style.neuron_fill,
                    stroke=style.neuron_stroke,
                    stroke_width=cfg.cell_stroke_width,
                ),
                z=1,
            )
        )
        return prims
    # Conv and pooling layers: a stack of square cell grids.
    side, total_w, total_h, overlapped = _grid_stack_geometry(r, cfg)
    for k in range(r.map_count):
        if overlapped:
            step = cfg.map_overlap_step
            gx = x - total_w / 2.0 + k * step
            gy = -total_h / 2.0 + k * step
        else:
            gx = x - side / 2.0
            gy = -total_h / 2.0 + k * (side + cfg.fm_gap)
        prims.append(
            Primitive(
                id=f"L{r.index}/fm{k}",
                shape=CellGrid(gx, gy, cfg.fm_cell, r.grid_rows, r.grid_cols),
                style=BaseStyle(
                    fill=style.neuron_fill,
                    stroke=style.neuron_stroke,
                    stroke_width=cfg.cell_stroke_width,
                ),
                z=1,
            )
        )
    return prims


# Pairs that get explicit edge segments: anything feeding a neuron column.
EDGE_PAIRS: frozenset[tuple[str, str]] = frozenset(
    {
        (KIND_FF, KIND_FF),
        (KIND_IMAGE, KIND_FF),
        (KIND_CONV2D, KIND_FF),
        (KIND_MAXPOOL2D, KIND_FF),
    }
)


def layout_network(
    net: ValidatedNetwork, cfg: Optional[LayoutConfig] = None
) -> SceneGraph:
    cfg = cfg or LayoutConfig()
    prims: list[Primitive] = []
    layer_elements: dict[int, tuple[str, ...]] = {}

    for r in net.layers:
        x = r.index * cfg.layer_spacing
        layer_prims = _layer_primitives(r, x, cfg, net)
        layer_elements[r.index] = tuple(p.id for p in layer_prims)
        prims.extend(layer_prims)

    centers = {p.id: shape_center(p.shape) for p in prims}

    pair_edges: dict[tuple[int, int], tuple[str, ...]] = {}
    edge_prims: list[Primitive] = []
    for i in range(net.pair_count):
        a, b = net.layers[i], net.layers[i + 1]
        if (a.kind, b.kind) not in EDGE_PAIRS:
            continue
        ids = []
        src_ids = layer_elements[i]
        dst_ids = layer_elements[i + 1]
        for ai, src in enumerate(src_ids):
            for bi, dst in enumerate(dst_ids):
                x0, y0 = centers[src]
                x1, y1 = centers[dst]
                eid = f"E{i}-{i + 1}/{ai}-{bi}"
                ids.append(eid)
                edge_prims.append(
                    Primitive(
                        id=eid,
                        shape=Segment(x0, y0, x1, y1),
                        style=BaseStyle(
                            fill=net.style.edge_color,
                            stroke=net.style.edge_color,
                            stroke_width=cfg.edge_width,
                        ),
                        z=0,
                    )
                )
        pair_edges[(i, i + 1)] = tuple(ids)
    prims.extend(edge_prims)

    view = fit_view(tuple(prims), cfg.margin)
    return SceneGraph(
        primitives=tuple(prims),
        view_box=view,
        layer_elements=layer_elements,
        pair_edges=pair_edges,
        config=cfg,
    )


# ---------------------------------------------------------------------------
# Debug serialization.
# ---------------------------------------------------------------------------

def _shape_to_json(shape: Shape) -> dict:
    if isinstance(shape, Circle):
        return {"type": "circle", "cx": shape.cx, "cy": shape.cy, "r": shape.r}
    if isinstance(shape, Rect):
        return {
            "type": "rect",
            "x0": shape.x0,
            "y0": shape.y0,
            "x1": shape.x1,
            "y1": shape.y1,
        }
    if isinstance(shape, Segment):
        return {
            "type": "segment",
            "x0": shape.x0,
            "y0": shape.y0,
            "x1": shape.x1,
            "y1": shape.y1,
        }
    return {
        "type": "cell_grid",
        "x": shape.x,
        "y": shape.y,
        "cell": shape.cell,
        "rows": shape.rows,
        "cols": shape.cols,
        "has_values": shape.values is not None,
    }


def scene_to_json(scene: SceneGraph) -> dict:
    return {
        "view_box": {
            "min_x": scene.view_box.min_x,
            "min_y": scene.view_box.min_y,
            "max_x": scene.view_box.max_x,
            "max_y": scene.view_box.max_y,
        },
        "primitives": [
            {
                "id": p.id,
                "z": p.z,
                "shape": _shape_to_json(p.shape),
                "style": {
                    "fill": p.style.fill.hex8(),
                    "stroke": p.style.stroke.hex8(),
                    "stroke_width": p.style.stroke_width,
                    "opacity": p.style.opacity,
                },
            }
            for p in scene.primitives
        ],
        "layer_elements": {
            str(k): list(v) for k, v in scene.layer_elements.items()
        },
        "pair_edges": {
            f"{a}-{b}": list(v) for (a, b), v in scene.pair_edges.items()
        },
    }
