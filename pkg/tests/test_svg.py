"""SVG emission: pinned formatting, attribute order, draw order."""

import re

import pytest

from nnanim.dsl import parse_network_spec
from nnanim.layout import (
    BaseStyle,
    Box,
    CellGrid,
    Circle,
    Primitive,
    Segment,
    layout_network,
)
from nnanim.model import Color, StyleSpec
from nnanim.sampling import Frame, FrameItem, OverlayDot, OverlayWindow, sample_at
from nnanim.svg import emit_svg, fmt
from nnanim.timeline import compile_animations
from nnanim.validate import validate_network

from conftest import read_corpus


VIEW = Box(-1.0, -1.0, 1.0, 1.0)
STYLE = StyleSpec()


def one_item_frame(prim, style=None):
    return Frame(
        index=0,
        t=0.0,
        items=(FrameItem(prim=prim, style=style or prim.style),),
        overlays=(),
    )


def white_circle(r=0.2):
    return Primitive(
        id="c",
        shape=Circle(0.0, 0.0, r),
        style=BaseStyle(
            fill=Color(255, 255, 255, 255), stroke=Color(0, 0, 0, 255)
        ),
        z=1,
    )


# ---------------------------------------------------------------------------
# Number formatting.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "x,expected",
    [
        (0.0, "0.0000"),
        (-0.0, "0.0000"),
        (-0.00004, "0.0000"),
        (1.0, "1.0000"),
        (-1.5, "-1.5000"),
        (0.12344999, "0.1234"),
        (2.5e-5, "0.0000"),
        (0.00025, "0.0003"),  # the double sits a hair above the tie
        (0.00035, "0.0003"),  # and this one a hair below

        (123.456789, "123.4568"),
    ],
)
def test_fmt(x, expected):
    assert fmt(x) == expected


# ---------------------------------------------------------------------------
# Element emission.
# ---------------------------------------------------------------------------

def test_circle_without_stroke():
    svg = emit_svg(one_item_frame(white_circle()), VIEW, 64, 48, STYLE)
    assert (
        '<circle cx="0.0000" cy="0.0000" r="0.2000" fill="#FFFFFF" '
        'fill-opacity="1.0000"/>' in svg
    )


def test_circle_with_stroke_attribute_order():
    prim = Primitive(
        id="c",
        shape=Circle(1.25, -0.5, 0.2),
        style=BaseStyle(
            fill=Color(0x3A, 0x50, 0x6B, 255),
            stroke=Color(255, 255, 255, 128),
            stroke_width=0.03,
        ),
        z=1,
    )
    svg = emit_svg(one_item_frame(prim), VIEW, 64, 48, STYLE)
    assert (
        '<circle cx="1.2500" cy="-0.5000" r="0.2000" fill="#3A506B" '
        'fill-opacity="1.0000" stroke="#FFFFFF" stroke-width="0.0300" '
        'stroke-opacity="0.5020"/>' in svg
    )


def test_opacity_scales_both_channels():
    prim = Primitive(
        id="c",
        shape=Circle(0, 0, 0.2),
        style=BaseStyle(
            fill=Color(255, 0, 0, 255),
            stroke=Color(0, 255, 0, 255),
            stroke_width=0.05,
            opacity=0.5,
        ),
        z=1,
    )
    svg = emit_svg(one_item_frame(prim), VIEW, 64, 48, STYLE)
    assert 'fill-opacity="0.5000"' in svg
    assert 'stroke-opacity="0.5000"' in svg


def test_zero_stroke_width_omits_stroke():
    svg = emit_svg(one_item_frame(white_circle()), VIEW, 64, 48, STYLE)
    circle_line = [l for l in svg.splitlines() if l.startswith("<circle")][0]
    assert "stroke" not in circle_line


def test_segment_emits_line():
    prim = Primitive(
        id="e",
        shape=Segment(0.0, 0.0, 2.0, 1.0),
        style=BaseStyle(
            fill=Color(0, 0, 0, 255),
            stroke=Color(0x8D, 0xA1, 0xB9, 255),
            stroke_width=0.02,
        ),
        z=0,
    )
    svg = emit_svg(one_item_frame(prim), VIEW, 64, 48, STYLE)
    assert (
        '<line x1="0.0000" y1="0.0000" x2="2.0000" y2="1.0000" '
        'stroke="#8DA1B9" stroke-width="0.0200" stroke-opacity="1.0000"/>' in svg
    )


def test_cell_grid_emits_one_rect_per_cell():
    prim = Primitive(
        id="g",
        shape=CellGrid(0.0, 0.0, 0.1, 2, 3),
        style=BaseStyle(fill=Color(10, 20, 30, 255), stroke=Color(0, 0, 0, 255)),
        z=1,
    )
    svg = emit_svg(one_item_frame(prim), VIEW, 64, 48, STYLE)
    rects = [l for l in svg.splitlines() if l.startswith("<rect") and "#0A141E" in l]
    assert len(rects) == 6
    assert '<rect x="0.1000" y="0.0000" width="0.1000" height="0.1000"' in rects[1]


def test_cell_grid_grayscale_values():
    prim = Primitive(
        id="g",
        shape=CellGrid(0.0, 0.0, 0.1, 1, 3, values=(0.0, 0.5, 1.0)),
        style=BaseStyle(fill=Color(10, 20, 30, 255), stroke=Color(0, 0, 0, 255)),
        z=1,
    )
    svg = emit_svg(one_item_frame(prim), VIEW, 64, 48, STYLE)
    assert 'fill="#000000"' in svg
    assert 'fill="#808080"' in svg  # round(0.5 * 255) = 128
    assert 'fill="#FFFFFF"' in svg


def test_background_rect_first():
    svg = emit_svg(one_item_frame(white_circle()), VIEW, 64, 48, STYLE)
    lines = svg.splitlines()
    assert lines[0] == (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.0000 -1.0000 '
        '2.0000 2.0000" width="64" height="48">'
    )
    assert lines[1] == (
        '<rect x="-1.0000" y="-1.0000" width="2.0000" height="2.0000" '
        'fill="#1C1C1C" fill-opacity="1.0000"/>'
    )
    assert lines[-1] == "</svg>"
    assert svg.endswith("</svg>\n")


def test_draw_order_z_then_emission():
    a = Primitive(
        id="a", shape=Circle(0, 0, 0.1),
        style=BaseStyle(fill=Color(1, 1, 1, 255), stroke=Color(0, 0, 0, 255)),
        z=1,
    )
    b = Primitive(
        id="b",
        shape=Segment(0, 0, 1, 1),
        style=BaseStyle(
            fill=Color(2, 2, 2, 255), stroke=Color(2, 2, 2, 255), stroke_width=0.01
        ),
        z=0,
    )
    frame = Frame(
        index=0,
        t=0.0,
        items=(FrameItem(a, a.style), FrameItem(b, b.style)),
        overlays=(),
    )
    svg = emit_svg(frame, VIEW, 64, 48, STYLE)
    lines = svg.splitlines()
    assert lines[2].startswith("<line")
    assert lines[3].startswith("<circle")


def test_overlays_draw_last():
    frame = Frame(
        index=0,
        t=0.0,
        items=(FrameItem(white_circle(), white_circle().style),),
        overlays=(
            OverlayDot(0.5, 0.5, 0.05),
            OverlayWindow(0.0, 0.0, 0.2, 0.2, filled=False, stroke_width=0.03),
        ),
    )
    svg = emit_svg(frame, VIEW, 64, 48, STYLE)
    lines = svg.splitlines()
    assert lines[-3].startswith("<circle")  # the dot
    assert 'fill="#FFD861"' in lines[-3]
    assert lines[-2].startswith("<rect")
    assert 'fill="none"' in lines[-2]
    assert 'stroke="#FFD861"' in lines[-2]


def test_filled_window_overlay():
    frame = Frame(
        index=0,
        t=0.0,
        items=(),
        overlays=(OverlayWindow(0.0, 0.1, 0.2, 0.3, filled=True, stroke_width=0.0),),
    )
    svg = emit_svg(frame, VIEW, 64, 48, STYLE)
    assert (
        '<rect x="0.0000" y="0.1000" width="0.2000" height="0.2000" '
        'fill="#FFD861" fill-opacity="1.0000"/>' in svg
    )


# ---------------------------------------------------------------------------
# Whole-scene rendering.
# ---------------------------------------------------------------------------

def build_frame(name, t=0.0):
    spec = parse_network_spec(read_corpus(name))
    from conftest import CORPUS

    net = validate_network(spec, base_dir=CORPUS)
    scene = layout_network(net)
    tl = compile_animations(net, scene)
    return net, scene, sample_at(tl, scene, t)


def test_full_frame_is_deterministic():
    net, scene, frame = build_frame("v02_ff_chain.nn")
    svg1 = emit_svg(frame, scene.view_box, 160, 90, net.style)
    net2, scene2, frame2 = build_frame("v02_ff_chain.nn")
    svg2 = emit_svg(frame2, scene2.view_box, 160, 90, net2.style)
    assert svg1 == svg2


def test_full_frame_well_formed():
    net, scene, frame = build_frame("v04_image_conv.nn")
    svg = emit_svg(frame, scene.view_box, 128, 72, net.style)
    assert svg.count("<svg") == 1
    assert svg.count("</svg>") == 1
    # Every drawn element is a self-closing tag from the allowed set.
    for line in svg.splitlines()[1:-1]:
        assert re.match(r"<(rect|circle|line) ", line)
        assert line.endswith("/>")


def test_numbers_all_fixed_point():
    net, scene, frame = build_frame("v05_conv_chain.nn")
    svg = emit_svg(frame, scene.view_box, 96, 54, net.style)
    for m in re.finditer(r'="([^"]*)"', svg):
        val = m.group(1)
        assert "e" not in val or not val[0].isdigit()  # no exponent notation
    assert "-0.0000" not in svg
