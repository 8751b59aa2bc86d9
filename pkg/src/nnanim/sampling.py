"""Evaluate a timeline at arbitrary times into fully resolved frames.

A frame lists every scene primitive with its effective style (base style
plus any track overrides active at that instant) and the transient
overlays: traveling pulse dots on edges and highlight windows on cell
grids.  Tracks apply in list order, so later tracks win when two touch
the same property at the same instant; outside a track's key span the
base style stands.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, replace
from math import ceil
from typing import Optional, Union

from .easing import Easing, ease
from .errors import OutOfRange
from .layout import BaseStyle, CellGrid, Primitive, SceneGraph, Segment
from .model import Color
from .timeline import Timeline, Track, TrackProperty

_EPS = 1e-9


def frame_times(duration_s: float, fps: int) -> list[float]:
    """Sampling instants k/fps for k in [0, N), N = ceil(duration * fps).

    The epsilon keeps an exact product like 2.0 * 30 from picking up a
    phantom extra frame when the float lands a hair above the integer.
    """
    n = max(1, ceil(duration_s * fps - _EPS))
    return [k / fps for k in range(n)]


def _lerp_value(v0, v1, e: float):
    if isinstance(v0, Color) and isinstance(v1, Color):
        def ch(a: int, b: int) -> int:
            x = a + e * (b - a)
            return min(255, max(0, round(x)))

        return Color(ch(v0.r, v1.r), ch(v0.g, v1.g), ch(v0.b, v1.b), ch(v0.a, v1.a))
    return v0 + e * (v1 - v0)


def track_value_at(track: Track, t: float) -> Optional[Union[float, Color]]:
    """Value of a track at time t, or None outside its key span."""
    keys = track.keys
    if t < keys[0].t or t > keys[-1].t:
        return None
    if t >= keys[-1].t:
        return keys[-1].value
    times = [k.t for k in keys]
    i = bisect_right(times, t) - 1
    k0, k1 = keys[i], keys[i + 1]
    u = (t - k0.t) / (k1.t - k0.t)
    if k1.easing is Easing.HOLD:
        return k1.value if u >= 1.0 else k0.value
    e = ease(k1.easing, u)
    return _lerp_value(k0.value, k1.value, e)


@dataclass(frozen=True)
class OverlayDot:
    x: float
    y: float
    r: float


@dataclass(frozen=True)
class OverlayWindow:
    x0: float
    y0: float
    x1: float
    y1: float
    filled: bool
    stroke_width: float


Overlay = Union[OverlayDot, OverlayWindow]


@dataclass(frozen=True)
class FrameItem:
    prim: Primitive
    style: BaseStyle


@dataclass(frozen=True)
class Frame:
    index: int
    t: float
    items: tuple[FrameItem, ...]
    overlays: tuple[Overlay, ...]


def _window_overlay(
    track: Track, grid: CellGrid, value: int, stroke_width: float
) -> OverlayWindow:
    row, col = divmod(value, track.window_cols)
    cell = grid.cell
    x0 = grid.x + col * track.window_stride * cell
    y0 = grid.y + row * track.window_stride * cell
    x1 = min(x0 + track.window_cells * cell, grid.x + grid.cols * cell)
    y1 = min(y0 + track.window_cells * cell, grid.y + grid.rows * cell)
    return OverlayWindow(
        x0=x0,
        y0=y0,
        x1=x1,
        y1=y1,
        filled=track.window_cells == 1,
        stroke_width=stroke_width,
    )


def sample_at(
    timeline: Timeline, scene: SceneGraph, t: float, index: int = 0
) -> Frame:
    """Resolve every primitive's style and the overlays at time t."""
    if t < -_EPS or t > timeline.duration_s + _EPS:
        raise OutOfRange(t, timeline.duration_s)
    t = min(max(t, 0.0), timeline.duration_s)

    styles: dict[str, BaseStyle] = {}
    overlays: list[Overlay] = []
    cfg = scene.config

    for track in timeline.tracks:
        if track.prop is TrackProperty.PULSE_POS:
            if not track.start <= t < track.end:
                continue
            p = track_value_at(track, t)
            if p is None or not 0.0 <= p <= 1.0:
                continue
            seg = scene.get(track.target).shape
            if not isinstance(seg, Segment):
                continue
            overlays.append(
                OverlayDot(
                    x=seg.x0 + p * (seg.x1 - seg.x0),
                    y=seg.y0 + p * (seg.y1 - seg.y0),
                    r=cfg.pulse_radius,
                )
            )
            continue
        if track.prop is TrackProperty.HIGHLIGHT_RECT:
            v = track_value_at(track, t)
            if v is None or int(v) < 0:
                continue
            grid = scene.get(track.target).shape
            if not isinstance(grid, CellGrid):
                continue
            overlays.append(
                _window_overlay(track, grid, int(v), cfg.highlight_stroke_width)
            )
            continue

        v = track_value_at(track, t)
        if v is None:
            continue
        base = styles.get(track.target) or scene.get(track.target).style
        if track.prop is TrackProperty.OPACITY:
            styles[track.target] = replace(base, opacity=float(v))
        elif track.prop is TrackProperty.FILL:
            styles[track.target] = replace(base, fill=v)
        elif track.prop is TrackProperty.STROKE:
            styles[track.target] = replace(base, stroke=v)

    items = tuple(
        FrameItem(prim=p, style=styles.get(p.id, p.style))
        for p in scene.primitives
    )
    return Frame(index=index, t=t, items=items, overlays=tuple(overlays))


def sample_frames(timeline: Timeline, scene: SceneGraph, fps: int) -> list[Frame]:
    return [
        sample_at(timeline, scene, t, index=i)
        for i, t in enumerate(frame_times(timeline.duration_s, fps))
    ]
