"""CPU rasterizer for resolved frames.

Mirrors the SVG emitter's draw order exactly: background, primitives
sorted by (z, emission order), overlays last, each painted src-over.
Coverage is supersampled: every subsample is a binary inside test at its
center, then an SxS box filter reduces to the output resolution.  The
world-to-pixel transform is a uniform scale centered in the output with
letterbox bars of background color.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .layout import Box, CellGrid, Circle, Rect, Segment
from .model import Color, StyleSpec
from .sampling import Frame, OverlayDot, OverlayWindow


@dataclass(eq=False)
class PixelGrid:
    """Row-major RGBA8 raster."""

    width: int
    height: int
    rgba: np.ndarray  # shape (height, width, 4), dtype uint8

    def tobytes(self) -> bytes:
        return self.rgba.tobytes()


class _Canvas:
    def __init__(
        self,
        view_box: Box,
        width_px: int,
        height_px: int,
        background: Color,
        supersample: int,
    ):
        self.s = supersample
        self.w = width_px
        self.h = height_px
        sw, sh = width_px * supersample, height_px * supersample
        self.scale = min(width_px / view_box.width, height_px / view_box.height)
        self.off_x = (width_px - view_box.width * self.scale) / 2.0
        self.off_y = (height_px - view_box.height * self.scale) / 2.0
        self.min_x = view_box.min_x
        self.min_y = view_box.min_y
        # World coordinates of subsample centers.
        self.xs = (
            self.min_x
            + ((np.arange(sw, dtype=np.float64) + 0.5) / supersample - self.off_x)
            / self.scale
        )
        self.ys = (
            self.min_y
            + ((np.arange(sh, dtype=np.float64) + 0.5) / supersample - self.off_y)
            / self.scale
        )
        self.buf = np.empty((sh, sw, 3), dtype=np.float32)
        self.buf[:] = np.array(
            [background.r, background.g, background.b], dtype=np.float32
        ) / np.float32(255.0)

    def _index_span(
        self, lo: float, hi: float, off: float, axis_min: float, limit: int
    ) -> tuple[int, int]:
        px_lo = off + (lo - axis_min) * self.scale
        px_hi = off + (hi - axis_min) * self.scale
        i0 = max(0, int(np.floor(px_lo * self.s)) - 1)
        i1 = min(limit, int(np.ceil(px_hi * self.s)) + 1)
        return i0, i1

    def region(self, bounds: Box):
        """Clipped subsample window plus broadcastable world coordinates."""
        x0, x1 = self._index_span(
            bounds.min_x, bounds.max_x, self.off_x, self.min_x, self.xs.shape[0]
        )
        y0, y1 = self._index_span(
            bounds.min_y, bounds.max_y, self.off_y, self.min_y, self.ys.shape[0]
        )
        if x0 >= x1 or y0 >= y1:
            return None
        return (
            (y0, y1, x0, x1),
            self.xs[x0:x1][None, :],
            self.ys[y0:y1][:, None],
        )

    def paint(self, window, mask: np.ndarray, rgb, alpha: float):
        """Src-over composite under a boolean mask.

        rgb is either a (3,) color or a per-pixel (h, w, 3) array, values
        already in [0, 1].
        """
        if alpha <= 0.0 or not mask.any():
            return
        y0, y1, x0, x1 = window
        region = self.buf[y0:y1, x0:x1]
        src = rgb[mask] if rgb.ndim == 3 else rgb
        a = np.float32(alpha)
        region[mask] = src * a + region[mask] * (np.float32(1.0) - a)

    def resolve(self) -> PixelGrid:
        s = self.s
        small = self.buf.reshape(self.h, s, self.w, s, 3).mean(axis=(1, 3))
        out = np.empty((self.h, self.w, 4), dtype=np.uint8)
        out[:, :, :3] = np.floor(
            np.clip(small, 0.0, 1.0) * np.float32(255.0) + np.float32(0.5)
        ).astype(np.uint8)
        out[:, :, 3] = 255
        return PixelGrid(self.w, self.h, out)


def _rgb01(color: Color) -> np.ndarray:
    return np.array([color.r, color.g, color.b], dtype=np.float32) / np.float32(255.0)


def _paint_circle_fill(cv, shape: Circle, color, alpha):
    reg = cv.region(
        Box(shape.cx - shape.r, shape.cy - shape.r, shape.cx + shape.r, shape.cy + shape.r)
    )
    if reg is None:
        return
    window, X, Y = reg
    mask = (X - shape.cx) ** 2 + (Y - shape.cy) ** 2 <= shape.r**2
    cv.paint(window, mask, _rgb01(color), alpha)


def _paint_circle_stroke(cv, shape: Circle, width, color, alpha):
    hw = width / 2.0
    r_out = shape.r + hw
    reg = cv.region(
        Box(shape.cx - r_out, shape.cy - r_out, shape.cx + r_out, shape.cy + r_out)
    )
    if reg is None:
        return
    window, X, Y = reg
    d2 = (X - shape.cx) ** 2 + (Y - shape.cy) ** 2
    r_in = max(0.0, shape.r - hw)
    mask = (d2 <= r_out**2) & (d2 >= r_in**2)
    cv.paint(window, mask, _rgb01(color), alpha)


def _rect_mask(X, Y, x0, y0, x1, y1):
    return (X >= x0) & (X <= x1) & (Y >= y0) & (Y <= y1)


def _paint_rect_fill(cv, x0, y0, x1, y1, color, alpha):
    reg = cv.region(Box(x0, y0, x1, y1))
    if reg is None:
        return
    window, X, Y = reg
    cv.paint(window, _rect_mask(X, Y, x0, y0, x1, y1), _rgb01(color), alpha)


def _paint_rect_stroke(cv, x0, y0, x1, y1, width, color, alpha):
    hw = width / 2.0
    reg = cv.region(Box(x0 - hw, y0 - hw, x1 + hw, y1 + hw))
    if reg is None:
        return
    window, X, Y = reg
    outer = _rect_mask(X, Y, x0 - hw, y0 - hw, x1 + hw, y1 + hw)
    ix0, iy0, ix1, iy1 = x0 + hw, y0 + hw, x1 - hw, y1 - hw
    if ix0 < ix1 and iy0 < iy1:
        outer &= ~_rect_mask(X, Y, ix0, iy0, ix1, iy1)
    cv.paint(window, outer, _rgb01(color), alpha)


def _paint_segment(cv, shape: Segment, width, color, alpha):
    hw = width / 2.0
    dx = shape.x1 - shape.x0
    dy = shape.y1 - shape.y0
    length = float(np.hypot(dx, dy))
    if length == 0.0:
        _paint_circle_fill(cv, Circle(shape.x0, shape.y0, hw), color, alpha)
        return
    reg = cv.region(
        Box(
            min(shape.x0, shape.x1) - hw,
            min(shape.y0, shape.y1) - hw,
            max(shape.x0, shape.x1) + hw,
            max(shape.y0, shape.y1) + hw,
        )
    )
    if reg is None:
        return
    window, X, Y = reg
    ux, uy = dx / length, dy / length
    rx = X - shape.x0
    ry = Y - shape.y0
    along = rx * ux + ry * uy
    perp = ry * ux - rx * uy
    mask = (along >= 0.0) & (along <= length) & (np.abs(perp) <= hw)
    cv.paint(window, mask, _rgb01(color), alpha)


def _paint_cell_grid(cv, shape: CellGrid, style, fill_alpha, stroke_alpha):
    w = shape.cols * shape.cell
    h = shape.rows * shape.cell
    sw = style.stroke_width
    hw = sw / 2.0
    reg = cv.region(Box(shape.x - hw, shape.y - hw, shape.x + w + hw, shape.y + h + hw))
    if reg is None:
        return
    window, X, Y = reg
    gx = (X - shape.x) / shape.cell
    gy = (Y - shape.y) / shape.cell

    if fill_alpha > 0.0:
        inside = (gx >= 0.0) & (gx <= shape.cols) & (gy >= 0.0) & (gy <= shape.rows)
        if shape.values is not None:
            levels = np.array(shape.values, dtype=np.float32).reshape(
                shape.rows, shape.cols
            )
            ci = np.clip(np.floor(gx).astype(np.int64), 0, shape.cols - 1)
            ri = np.clip(np.floor(gy).astype(np.int64), 0, shape.rows - 1)
            ri_b, ci_b = np.broadcast_arrays(ri, ci)
            per_px = levels[ri_b, ci_b][:, :, None].repeat(3, axis=2)
            cv.paint(window, inside, per_px, fill_alpha)
        else:
            cv.paint(window, inside, _rgb01(style.fill), fill_alpha)

    if stroke_alpha > 0.0 and sw > 0.0:
        expanded = (
            (gx >= -hw / shape.cell)
            & (gx <= shape.cols + hw / shape.cell)
            & (gy >= -hw / shape.cell)
            & (gy <= shape.rows + hw / shape.cell)
        )
        dxl = np.abs(gx - np.clip(np.round(gx), 0, shape.cols)) * shape.cell
        dyl = np.abs(gy - np.clip(np.round(gy), 0, shape.rows)) * shape.cell
        lines = expanded & ((dxl <= hw) | (dyl <= hw))
        cv.paint(window, lines, _rgb01(style.stroke), stroke_alpha)


def rasterize(
    frame: Frame,
    view_box: Box,
    width_px: int,
    height_px: int,
    style: StyleSpec,
    supersample: int = 2,
) -> PixelGrid:
    """Rasterize one resolved frame to RGBA8."""
    cv = _Canvas(view_box, width_px, height_px, style.background, supersample)

    ordered = sorted(
        enumerate(frame.items), key=lambda pair: (pair[1].prim.z, pair[0])
    )
    for _, item in ordered:
        st = item.style
        shape = item.prim.shape
        fill_alpha = st.fill.a / 255.0 * st.opacity
        stroke_alpha = st.stroke.a / 255.0 * st.opacity
        if isinstance(shape, Circle):
            if fill_alpha > 0.0:
                _paint_circle_fill(cv, shape, st.fill, fill_alpha)
            if stroke_alpha > 0.0 and st.stroke_width > 0.0:
                _paint_circle_stroke(
                    cv, shape, st.stroke_width, st.stroke, stroke_alpha
                )
        elif isinstance(shape, Rect):
            if fill_alpha > 0.0:
                _paint_rect_fill(
                    cv, shape.x0, shape.y0, shape.x1, shape.y1, st.fill, fill_alpha
                )
            if stroke_alpha > 0.0 and st.stroke_width > 0.0:
                _paint_rect_stroke(
                    cv,
                    shape.x0,
                    shape.y0,
                    shape.x1,
                    shape.y1,
                    st.stroke_width,
                    st.stroke,
                    stroke_alpha,
                )
        elif isinstance(shape, Segment):
            if stroke_alpha > 0.0 and st.stroke_width > 0.0:
                _paint_segment(cv, shape, st.stroke_width, st.stroke, stroke_alpha)
        elif isinstance(shape, CellGrid):
            _paint_cell_grid(cv, shape, st, fill_alpha, stroke_alpha)
        else:
            raise TypeError(f"unknown shape {type(shape).__name__}")

    pulse = style.pulse_color
    pulse_alpha = pulse.a / 255.0
    for overlay in frame.overlays:
        if isinstance(overlay, OverlayDot):
            _paint_circle_fill(
                cv, Circle(overlay.x, overlay.y, overlay.r), pulse, pulse_alpha
            )
        elif isinstance(overlay, OverlayWindow):
            if overlay.filled:
                _paint_rect_fill(
                    cv,
                    overlay.x0,
                    overlay.y0,
                    overlay.x1,
                    overlay.y1,
                    pulse,
                    pulse_alpha,
                )
            else:
                _paint_rect_stroke(
                    cv,
                    overlay.x0,
                    overlay.y0,
                    overlay.x1,
                    overlay.y1,
                    overlay.stroke_width,
                    pulse,
                    pulse_alpha,
                )
    return cv.resolve()
