"""Scene-graph layout: positions, ids, edges, bounds, determinism."""

import math

import pytest

from nnanim.dsl import parse_network_spec
from nnanim.errors import EmptyScene
from nnanim.layout import (
    EDGE_PAIRS,
    CellGrid,
    Circle,
    LayoutConfig,
    Segment,
    fit_view,
    layout_network,
    scene_to_json,
    shape_bounds,
    shape_center,
)
from nnanim.model import (
    Conv2DLayer,
    FeedForwardLayer,
    ForwardPass,
    NetworkSpec,
)
from nnanim.validate import validate_network

from conftest import CORPUS, read_corpus


def build_scene(name):
    spec = parse_network_spec(read_corpus(name))
    net = validate_network(spec, base_dir=CORPUS)
    return net, layout_network(net)


def ff_net(units):
    spec = NetworkSpec(
        layers=tuple(FeedForwardLayer(units=u) for u in units),
        directives=(ForwardPass(),),
    )
    return validate_network(spec)


def test_layer_x_positions():
    net, scene = build_scene("v02_ff_chain.nn")
    cfg = scene.config
    for i, ids in scene.layer_elements.items():
        for eid in ids:
            cx, _ = scene.element_center(eid)
            assert cx == pytest.approx(i * cfg.layer_spacing, abs=1e-9)


def test_ff_vertical_centering_and_spacing():
    scene = layout_network(ff_net([4, 7]))
    for i, count in ((0, 4), (1, 7)):
        ids = scene.layer_elements[i]
        assert ids == tuple(f"L{i}/n{j}" for j in range(count))
        ys = [scene.element_center(e)[1] for e in ids]
        assert abs(sum(ys)) < 1e-9
        gaps = [b - a for a, b in zip(ys, ys[1:])]
        for g in gaps:
            assert g == pytest.approx(scene.config.node_spacing, abs=1e-9)


def test_element_ids_and_counts():
    net, scene = build_scene("v04_image_conv.nn")
    assert scene.layer_elements[0] == ("L0/img",)
    assert scene.layer_elements[1] == ("L1/fm0", "L1/fm1")
    assert scene.layer_elements[2] == ("L2/fm0", "L2/fm1")
    assert scene.layer_elements[3] == tuple(f"L3/n{j}" for j in range(4))
    assert scene.layer_elements[4] == tuple(f"L4/n{j}" for j in range(2))


def test_edges_only_for_neuron_fed_pairs():
    net, scene = build_scene("v04_image_conv.nn")
    # image->conv, conv->pool get no edges; pool->ff and ff->ff do.
    assert set(scene.pair_edges) == {(2, 3), (3, 4)}
    assert len(scene.pair_edges[(2, 3)]) == 2 * 4
    assert len(scene.pair_edges[(3, 4)]) == 4 * 2


def test_edge_ids_lexicographic():
    scene = layout_network(ff_net([2, 3]))
    assert scene.pair_edges[(0, 1)] == (
        "E0-1/0-0",
        "E0-1/0-1",
        "E0-1/0-2",
        "E0-1/1-0",
        "E0-1/1-1",
        "E0-1/1-2",
    )


def test_edge_endpoints_match_element_centers():
    net, scene = build_scene("v06_pool_sandwich.nn")
    for (i, j), edge_ids in scene.pair_edges.items():
        src_ids = scene.layer_elements[i]
        dst_ids = scene.layer_elements[j]
        for eid in edge_ids:
            tail = eid.split("/")[1]
            a, b = (int(part) for part in tail.split("-"))
            seg = scene.get(eid).shape
            assert isinstance(seg, Segment)
            sx, sy = scene.element_center(src_ids[a])
            dx, dy = scene.element_center(dst_ids[b])
            assert (seg.x0, seg.y0) == pytest.approx((sx, sy), abs=1e-12)
            assert (seg.x1, seg.y1) == pytest.approx((dx, dy), abs=1e-12)


def test_z_order_and_emission():
    scene = layout_network(ff_net([2, 2]))
    prims = scene.primitives
    # Emission: layer elements first, then edges.
    assert [p.id for p in prims[:4]] == ["L0/n0", "L0/n1", "L1/n0", "L1/n1"]
    assert all(p.z == 1 for p in prims[:4])
    assert all(p.z == 0 for p in prims[4:])


def test_view_box_contains_everything_with_margin():
    for name in ("v02_ff_chain.nn", "v04_image_conv.nn", "v06_pool_sandwich.nn"):
        net, scene = build_scene(name)
        m = scene.config.margin
        vb = scene.view_box
        for p in scene.primitives:
            b = shape_bounds(p.shape, p.style.stroke_width)
            assert b.min_x >= vb.min_x + m - 1e-9
            assert b.min_y >= vb.min_y + m - 1e-9
            assert b.max_x <= vb.max_x - m + 1e-9
            assert b.max_y <= vb.max_y - m + 1e-9
        # The margin is tight on at least one side in each axis.
        xs = [shape_bounds(p.shape, p.style.stroke_width) for p in scene.primitives]
        assert min(b.min_x for b in xs) == pytest.approx(vb.min_x + m, abs=1e-12)
        assert max(b.max_x for b in xs) == pytest.approx(vb.max_x - m, abs=1e-12)


def test_image_grid_centered_with_pixels():
    net, scene = build_scene("v03_image_ff.nn")
    prim = scene.get("L0/img")
    grid = prim.shape
    assert isinstance(grid, CellGrid)
    assert (grid.rows, grid.cols) == (5, 5)
    assert grid.values is not None and len(grid.values) == 25
    cx, cy = shape_center(grid)
    assert (cx, cy) == pytest.approx((0.0, 0.0), abs=1e-12)


def test_map_stack_vertical_when_short():
    net, scene = build_scene("v04_image_conv.nn")
    g0 = scene.get("L1/fm0").shape
    g1 = scene.get("L1/fm1").shape
    assert g0.x == g1.x
    side = g0.rows * g0.cell
    assert g1.y - g0.y == pytest.approx(side + scene.config.fm_gap, abs=1e-12)


def test_map_stack_overlaps_when_tall():
    spec = NetworkSpec(
        layers=(
            Conv2DLayer(feature_maps=12, map_size=8, filter_size=1),
            FeedForwardLayer(units=2),
            FeedForwardLayer(units=2),
        ),
        directives=(ForwardPass(),),
    )
    net = validate_network(spec)
    cfg = LayoutConfig()
    side = 8 * cfg.fm_cell
    stacked = 12 * side + 11 * cfg.fm_gap
    assert stacked > cfg.map_overlap_limit
    scene = layout_network(net)
    shapes = [scene.get(f"L0/fm{k}").shape for k in range(12)]
    for k in range(1, 12):
        assert shapes[k].x - shapes[k - 1].x == pytest.approx(cfg.map_overlap_step, abs=1e-12)
        assert shapes[k].y - shapes[k - 1].y == pytest.approx(cfg.map_overlap_step, abs=1e-12)
    total = side + 11 * cfg.map_overlap_step
    assert total <= cfg.map_overlap_limit


def test_scene_lookup_helpers():
    scene = layout_network(ff_net([2, 2]))
    assert scene.has("L0/n1")
    assert not scene.has("L9/n0")
    assert scene.get("E0-1/1-0").z == 0


def test_deterministic_layout():
    a = scene_to_json(layout_network(ff_net([3, 5, 2])))
    b = scene_to_json(layout_network(ff_net([3, 5, 2])))
    assert a == b


def test_custom_config_scales():
    cfg = LayoutConfig(layer_spacing=4.0, node_spacing=1.2)
    scene = layout_network(ff_net([2, 2]), cfg)
    assert scene.element_center("L1/n0")[0] == pytest.approx(4.0)
    ys = [scene.element_center(f"L0/n{j}")[1] for j in range(2)]
    assert ys[1] - ys[0] == pytest.approx(1.2)


def test_fit_view_rejects_empty():
    with pytest.raises(EmptyScene):
        fit_view((), 0.5)


def test_edge_pair_set():
    assert EDGE_PAIRS == frozenset(
        {("ff", "ff"), ("image", "ff"), ("conv2d", "ff"), ("maxpool2d", "ff")}
    )


def test_view_box_aspect_free():
    # The view box is geometry only; no forced aspect ratio.
    net, scene = build_scene("v01_min_ff.nn")
    vb = scene.view_box
    assert vb.width > 0 and vb.height > 0
    assert math.isfinite(vb.width) and math.isfinite(vb.height)
