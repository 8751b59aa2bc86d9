"""SVG 1.1 frame emitter.

Output is fully pinned for byte-for-byte reproducibility: numbers are
formatted to four decimals (round-half-even, negative zero normalized),
attribute order is fixed, and elements appear in draw order (z, then
emission order) with overlays last.  Colors are 6-digit uppercase hex;
the alpha channel folds into fill-opacity / stroke-opacity together with
the element's opacity.
"""

from __future__ import annotations

from .layout import Box, CellGrid, Circle, Rect, Segment
from .model import Color, StyleSpec
from .sampling import Frame, FrameItem, OverlayDot, OverlayWindow


def fmt(x: float) -> str:
    """Four-decimal fixed format; never emits negative zero."""
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


def _fill_attrs(color: Color, opacity: float) -> str:
    return f'fill="{color.hex6()}" fill-opacity="{fmt(color.a / 255.0 * opacity)}"'


def _stroke_attrs(color: Color, width: float, opacity: float) -> str:
    return (
        f'stroke="{color.hex6()}" stroke-width="{fmt(width)}" '
        f'stroke-opacity="{fmt(color.a / 255.0 * opacity)}"'
    )


def _has_stroke(color: Color, width: float, opacity: float) -> bool:
    return width > 0.0 and color.a > 0 and opacity > 0.0


def _emit_circle(shape: Circle, item: FrameItem) -> str:
    st = item.style
    parts = [
        f'<circle cx="{fmt(shape.cx)}" cy="{fmt(shape.cy)}" r="{fmt(shape.r)}"',
        _fill_attrs(st.fill, st.opacity),
    ]
    if _has_stroke(st.stroke, st.stroke_width, st.opacity):
        parts.append(_stroke_attrs(st.stroke, st.stroke_width, st.opacity))
    return " ".join(parts) + "/>"


def _rect_text(
    x0: float, y0: float, x1: float, y1: float, attrs: list[str]
) -> str:
    head = (
        f'<rect x="{fmt(x0)}" y="{fmt(y0)}" '
        f'width="{fmt(x1 - x0)}" height="{fmt(y1 - y0)}"'
    )
    return " ".join([head] + attrs) + "/>"


def _emit_rect(shape: Rect, item: FrameItem) -> str:
    st = item.style
    attrs = [_fill_attrs(st.fill, st.opacity)]
    if _has_stroke(st.stroke, st.stroke_width, st.opacity):
        attrs.append(_stroke_attrs(st.stroke, st.stroke_width, st.opacity))
    return _rect_text(shape.x0, shape.y0, shape.x1, shape.y1, attrs)


def _emit_segment(shape: Segment, item: FrameItem) -> str:
    st = item.style
    return (
        f'<line x1="{fmt(shape.x0)}" y1="{fmt(shape.y0)}" '
        f'x2="{fmt(shape.x1)}" y2="{fmt(shape.y1)}" '
        + _stroke_attrs(st.stroke, st.stroke_width, st.opacity)
        + "/>"
    )


def _emit_cell_grid(shape: CellGrid, item: FrameItem) -> list[str]:
    st = item.style
    out = []
    stroke = (
        [_stroke_attrs(st.stroke, st.stroke_width, st.opacity)]
        if _has_stroke(st.stroke, st.stroke_width, st.opacity)
        else []
    )
    for row in range(shape.rows):
        for col in range(shape.cols):
            if shape.values is not None:
                v = shape.values[row * shape.cols + col]
                level = min(255, max(0, round(v * 255.0)))
                fill = Color(level, level, level, st.fill.a)
            else:
                fill = st.fill
            x0 = shape.x + col * shape.cell
            y0 = shape.y + row * shape.cell
            attrs = [_fill_attrs(fill, st.opacity)] + stroke
            out.append(
                _rect_text(x0, y0, x0 + shape.cell, y0 + shape.cell, attrs)
            )
    return out


def _emit_overlay(overlay, style: StyleSpec) -> str:
    pulse = style.pulse_color
    if isinstance(overlay, OverlayDot):
        return (
            f'<circle cx="{fmt(overlay.x)}" cy="{fmt(overlay.y)}" '
            f'r="{fmt(overlay.r)}" ' + _fill_attrs(pulse, 1.0) + "/>"
        )
    if overlay.filled:
        attrs = [_fill_attrs(pulse, 1.0)]
    else:
        attrs = ['fill="none"', _stroke_attrs(pulse, overlay.stroke_width, 1.0)]
    return _rect_text(overlay.x0, overlay.y0, overlay.x1, overlay.y1, attrs)


def emit_svg(
    frame: Frame,
    view_box: Box,
    width_px: int,
    height_px: int,
    style: StyleSpec,
) -> str:
    """Serialize one frame to a standalone SVG document."""
    vb = (
        f"{fmt(view_box.min_x)} {fmt(view_box.min_y)} "
        f"{fmt(view_box.width)} {fmt(view_box.height)}"
    )
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb}" '
        f'width="{width_px}" height="{height_px}">',
        _rect_text(
            view_box.min_x,
            view_box.min_y,
            view_box.max_x,
            view_box.max_y,
            [_fill_attrs(style.background, 1.0)],
        ),
    ]
    ordered = sorted(
        enumerate(frame.items), key=lambda pair: (pair[1].prim.z, pair[0])
    )
    for _, item in ordered:
        shape = item.prim.shape
        if isinstance(shape, Circle):
            lines.append(_emit_circle(shape, item))
        elif isinstance(shape, Rect):
            lines.append(_emit_rect(shape, item))
        elif isinstance(shape, Segment):
            lines.append(_emit_segment(shape, item))
        elif isinstance(shape, CellGrid):
            lines.extend(_emit_cell_grid(shape, item))
        else:
            raise TypeError(f"unknown shape {type(shape).__name__}")
    for overlay in frame.overlays:
        lines.append(_emit_overlay(overlay, style))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
