"""Keyframe timeline compilation.

Directives compile into per-primitive property tracks.  Each track owns a
time-sorted list of keyframes; a track overrides the primitive's base
style only inside its key span [first key time, last key time], so tracks
from consecutive directives never fight each other outside their windows.
Between two keys the later key's easing shapes the interpolation; Hold
keeps the earlier value until the key lands.

Duration algebra (pd = pair_duration_s, L = layer count):
    forward_pass : (L - 1) * pd
    dropout      : 0.5 * pd + (L - 1) * pd + 0.5 * pd
Directives run back to back, so segment boundaries tile exactly and the
timeline duration equals the last segment's end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import floor
from typing import Callable, Optional, Union

from .easing import Easing
from .errors import NoEligibleLayers, UnregisteredPair
from .layout import SceneGraph
from .model import (
    Color,
    Directive,
    Dropout,
    ForwardPass,
    KIND_CONV2D,
    KIND_FF,
    KIND_IMAGE,
    KIND_MAXPOOL2D,
)
from .prng import SplitMix64, sample_distinct
from .validate import ValidatedNetwork

# Fraction of full opacity a source layer dips to mid-handoff.
DIP_OPACITY = 0.35


class TrackProperty(str, Enum):
    OPACITY = "opacity"
    FILL = "fill"
    STROKE = "stroke"
    PULSE_POS = "pulse_pos"
    HIGHLIGHT_RECT = "highlight_rect"


KeyValue = Union[float, int, Color]


@dataclass(frozen=True)
class Keyframe:
    t: float
    value: KeyValue
    easing: Easing


@dataclass(frozen=True)
class Track:
    """Keyframes for one property of one primitive.

    Highlight tracks carry window geometry: a key's integer value is a
    step index; divmod(value, window_cols) gives the window's cell row and
    column, scaled by window_stride cells, spanning window_cells per side.
    A value of -1 hides the window.
    """

    target: str
    prop: TrackProperty
    keys: tuple[Keyframe, ...]
    window_cells: int = 1
    window_stride: int = 1
    window_cols: int = 1

    @property
    def start(self) -> float:
        return self.keys[0].t

    @property
    def end(self) -> float:
        return self.keys[-1].t


@dataclass(frozen=True)
class DirectiveSpan:
    index: int
    name: str
    start_s: float
    end_s: float


@dataclass(frozen=True)
class Timeline:
    tracks: tuple[Track, ...]
    duration_s: float
    segments: tuple[DirectiveSpan, ...]

    def validate(self):
        """Internal consistency: sorted keys, bounds, exact end coverage."""
        for tr in self.tracks:
            if not tr.keys:
                raise ValueError(f"track {tr.target}/{tr.prop} has no keys")
            times = [k.t for k in tr.keys]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError(
                    f"track {tr.target}/{tr.prop} keys not strictly increasing"
                )
            if times[0] < 0.0 or times[-1] > self.duration_s:
                raise ValueError(
                    f"track {tr.target}/{tr.prop} exceeds [0, {self.duration_s}]"
                )
        if self.tracks:
            last = max(tr.end for tr in self.tracks)
            if last != self.duration_s:
                raise ValueError(
                    f"no track reaches the timeline end ({last} != {self.duration_s})"
                )
        for a, b in zip(self.segments, self.segments[1:]):
            if a.end_s != b.start_s:
                raise ValueError("directive segments do not tile")


# ---------------------------------------------------------------------------
# Durations.
# ---------------------------------------------------------------------------

def forward_pass_duration(layer_count: int, pd: float) -> float:
    return (layer_count - 1) * pd


def dropout_duration(layer_count: int, pd: float) -> float:
    return 0.5 * pd + (layer_count - 1) * pd + 0.5 * pd


def directive_duration(d: Directive, layer_count: int, pd: float) -> float:
    if isinstance(d, ForwardPass):
        return forward_pass_duration(layer_count, pd)
    if isinstance(d, Dropout):
        return dropout_duration(layer_count, pd)
    raise TypeError(f"unknown directive {type(d).__name__}")


# ---------------------------------------------------------------------------
# Dropout planning.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DropPlan:
    """Sampled unit indices per eligible layer, sorted ascending."""

    rate: float
    seed: int
    dropped: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def is_dropped(self, layer: int, unit: int) -> bool:
        return unit in self.dropped.get(layer, ())


def plan_dropout(net: ValidatedNetwork, rate: float, seed: int) -> DropPlan:
    """Sample dropped units for every eligible layer.

    One generator stream per plan, seeded by the directive's seed; layers
    consume outputs in index order.  The per-layer count is
    floor(rate * units) with a tiny epsilon so exact products like
    0.25 * 8 do not lose a unit to float representation.
    """
    eligible = net.eligible_dropout_layers()
    if not eligible:
        raise NoEligibleLayers()
    rng = SplitMix64(seed)
    dropped: dict[int, tuple[int, ...]] = {}
    for idx in eligible:
        n = net.layers[idx].map_count
        k = floor(rate * n + 1e-9)
        dropped[idx] = sample_distinct(n, k, rng)
    return DropPlan(rate=rate, seed=seed, dropped=dropped)


# ---------------------------------------------------------------------------
# Pair animation registry.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairContext:
    net: ValidatedNetwork
    scene: SceneGraph
    pair_index: int
    start_s: float
    end_s: float
    dropped_src: frozenset[int] = frozenset()
    dropped_dst: frozenset[int] = frozenset()

    @property
    def src(self):
        return self.net.layers[self.pair_index]

    @property
    def dst(self):
        return self.net.layers[self.pair_index + 1]

    def src_ids(self) -> tuple[str, ...]:
        return self.scene.layer_elements[self.pair_index]

    def dst_ids(self) -> tuple[str, ...]:
        return self.scene.layer_elements[self.pair_index + 1]


BuilderFn = Callable[[PairContext], list[Track]]


class PairRegistry:
    """Maps ordered (upstream kind, downstream kind) to a track builder."""

    def __init__(self):
        self._builders: dict[tuple[str, str], BuilderFn] = {}

    def register(self, kind_a: str, kind_b: str, fn: BuilderFn):
        self._builders[(kind_a, kind_b)] = fn

    def get(self, kind_a: str, kind_b: str) -> BuilderFn:
        try:
            return self._builders[(kind_a, kind_b)]
        except KeyError:
            raise UnregisteredPair(kind_a, kind_b) from None

    def pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset(self._builders)


def _pulse_and_flash(ctx: PairContext) -> list[Track]:
    """Neuron-to-neuron handoff: a dot travels each edge, edges flash."""
    i = ctx.pair_index
    j = i + 1
    style = ctx.net.style
    tracks: list[Track] = []
    na = len(ctx.src_ids())
    nb = len(ctx.dst_ids())
    for ai in range(na):
        if ai in ctx.dropped_src:
            continue
        for bi in range(nb):
            if bi in ctx.dropped_dst:
                continue
            eid = f"E{i}-{j}/{ai}-{bi}"
            tracks.append(
                Track(
                    target=eid,
                    prop=TrackProperty.PULSE_POS,
                    keys=(
                        Keyframe(ctx.start_s, 0.0, Easing.HOLD),
                        Keyframe(ctx.end_s, 1.0, Easing.SMOOTHSTEP),
                    ),
                )
            )
            tracks.append(
                Track(
                    target=eid,
                    prop=TrackProperty.STROKE,
                    keys=(
                        Keyframe(ctx.start_s, style.pulse_color, Easing.HOLD),
                        Keyframe(ctx.end_s, style.edge_color, Easing.HOLD),
                    ),
                )
            )
    return tracks


def _dip_and_flash(ctx: PairContext) -> list[Track]:
    """Source layer dips in opacity while destination elements flash."""
    style = ctx.net.style
    tracks: list[Track] = []
    start, end = ctx.start_s, ctx.end_s
    mid = start + (end - start) / 2.0
    for sid in ctx.src_ids():
        base_op = ctx.scene.get(sid).style.opacity
        tracks.append(
            Track(
                target=sid,
                prop=TrackProperty.OPACITY,
                keys=(
                    Keyframe(start, base_op, Easing.HOLD),
                    Keyframe(mid, DIP_OPACITY, Easing.SMOOTHSTEP),
                    Keyframe(end, base_op, Easing.SMOOTHSTEP),
                ),
            )
        )
    dst_ids = ctx.dst_ids()
    n = len(dst_ids)
    sub = (end - start) / n
    for bi, did in enumerate(dst_ids):
        if bi in ctx.dropped_dst:
            continue
        fs = start + bi * sub
        fe = end if bi == n - 1 else start + (bi + 1) * sub
        base_fill = ctx.scene.get(did).style.fill
        tracks.append(
            Track(
                target=did,
                prop=TrackProperty.FILL,
                keys=(
                    Keyframe(fs, style.pulse_color, Easing.HOLD),
                    Keyframe(fe, base_fill, Easing.HOLD),
                ),
            )
        )
    return tracks


def _scan_window_tracks(
    ctx: PairContext, window_side: int, stride: int, steps_per_axis: int
) -> list[Track]:
    """Shared scan machinery: window over source maps, cell flash on dest."""
    start, end = ctx.start_s, ctx.end_s
    total = steps_per_axis * steps_per_axis
    dt = (end - start) / total
    tracks: list[Track] = []
    for sid in ctx.src_ids():
        keys = [
            Keyframe(start + i * dt, i, Easing.HOLD) for i in range(total)
        ]
        keys.append(Keyframe(end, -1, Easing.HOLD))
        tracks.append(
            Track(
                target=sid,
                prop=TrackProperty.HIGHLIGHT_RECT,
                keys=tuple(keys),
                window_cells=window_side,
                window_stride=stride,
                window_cols=steps_per_axis,
            )
        )
    dst = ctx.dst
    dst_cells = dst.grid_rows * dst.grid_cols
    for did in ctx.dst_ids():
        keys = [
            Keyframe(start + i * dt, min(i, dst_cells - 1), Easing.HOLD)
            for i in range(total)
        ]
        keys.append(Keyframe(end, -1, Easing.HOLD))
        tracks.append(
            Track(
                target=did,
                prop=TrackProperty.HIGHLIGHT_RECT,
                keys=tuple(keys),
                window_cells=1,
                window_stride=1,
                window_cols=dst.grid_cols,
            )
        )
    return tracks


def _conv_scan(ctx: PairContext) -> list[Track]:
    """Filter window sweeps the source maps, destination cells light up.

    The sweep runs over the drawn source grid with the downstream layer's
    filter size, stride 1: (side - filter + 1)^2 steps.
    """
    side = ctx.src.grid_rows
    f = min(ctx.dst.spec.filter_size, side)
    steps = side - f + 1
    return _scan_window_tracks(ctx, window_side=f, stride=1, steps_per_axis=steps)


def _pool_scan(ctx: PairContext) -> list[Track]:
    """Kernel-sized windows tile the source maps: floor(side/kernel)^2 steps."""
    side = ctx.src.grid_rows
    k = ctx.dst.spec.kernel
    steps = max(1, side // k)
    return _scan_window_tracks(
        ctx, window_side=min(k, side), stride=k, steps_per_axis=steps
    )


def default_registry() -> PairRegistry:
    reg = PairRegistry()
    reg.register(KIND_FF, KIND_FF, _pulse_and_flash)
    reg.register(KIND_IMAGE, KIND_FF, _dip_and_flash)
    reg.register(KIND_IMAGE, KIND_CONV2D, _dip_and_flash)
    reg.register(KIND_CONV2D, KIND_FF, _dip_and_flash)
    reg.register(KIND_MAXPOOL2D, KIND_FF, _dip_and_flash)
    reg.register(KIND_MAXPOOL2D, KIND_CONV2D, _dip_and_flash)
    reg.register(KIND_CONV2D, KIND_CONV2D, _conv_scan)
    reg.register(KIND_CONV2D, KIND_MAXPOOL2D, _pool_scan)
    return reg


DEFAULT_REGISTRY = default_registry()


def pair_transition(
    kind_a: str,
    kind_b: str,
    ctx: PairContext,
    registry: Optional[PairRegistry] = None,
) -> list[Track]:
    reg = registry if registry is not None else DEFAULT_REGISTRY
    return reg.get(kind_a, kind_b)(ctx)


# ---------------------------------------------------------------------------
# Directive compilation.
# ---------------------------------------------------------------------------

def _forward_tracks(
    net: ValidatedNetwork,
    scene: SceneGraph,
    start: float,
    plan: Optional[DropPlan],
    registry: Optional[PairRegistry],
) -> list[Track]:
    pd = net.render.pair_duration_s
    tracks: list[Track] = []
    for p in range(net.pair_count):
        a, b = net.layers[p], net.layers[p + 1]
        dropped_src = frozenset(plan.dropped.get(p, ())) if plan else frozenset()
        dropped_dst = frozenset(plan.dropped.get(p + 1, ())) if plan else frozenset()
        ctx = PairContext(
            net=net,
            scene=scene,
            pair_index=p,
            start_s=start + p * pd,
            end_s=start + (p + 1) * pd,
            dropped_src=dropped_src,
            dropped_dst=dropped_dst,
        )
        tracks.extend(pair_transition(a.kind, b.kind, ctx, registry))
    return tracks


def _incident_edge_ids(
    net: ValidatedNetwork, scene: SceneGraph, layer: int, unit: int
) -> list[str]:
    """Edges touching one neuron, in scene emission order per pair."""
    out: list[str] = []
    left = (layer - 1, layer)
    if left in scene.pair_edges:
        n_src = len(scene.layer_elements[layer - 1])
        out.extend(f"E{left[0]}-{left[1]}/{a}-{unit}" for a in range(n_src))
    right = (layer, layer + 1)
    if right in scene.pair_edges:
        n_dst = len(scene.layer_elements[layer + 1])
        out.extend(f"E{right[0]}-{right[1]}/{unit}-{b}" for b in range(n_dst))
    return out


def _dropout_tracks(
    net: ValidatedNetwork,
    scene: SceneGraph,
    d: Dropout,
    start: float,
    end: float,
    registry: Optional[PairRegistry],
) -> list[Track]:
    pd = net.render.pair_duration_s
    layer_count = len(net.layers)
    style = net.style
    fps = net.render.fps
    apply_end = start + 0.5 * pd
    restore_start = apply_end + (layer_count - 1) * pd

    plan = plan_dropout(net, d.rate, d.seed)

    # Ordered unique fade targets: dropped neurons plus incident edges.
    targets: dict[str, None] = {}
    for layer in sorted(plan.dropped):
        for unit in plan.dropped[layer]:
            targets[f"L{layer}/n{unit}"] = None
            for eid in _incident_edge_ids(net, scene, layer, unit):
                targets[eid] = None

    # The restore completes strictly before the last sampled frame, which
    # can sit anywhere in [end - 1/fps, end); the extra quarter period
    # keeps float rounding from leaking a mid-restore value into it.
    restore_done = end - 1.25 / fps
    if restore_done <= restore_start:
        restore_done = (restore_start + end) / 2.0

    tracks: list[Track] = []
    for tid in targets:
        base_op = scene.get(tid).style.opacity
        tracks.append(
            Track(
                target=tid,
                prop=TrackProperty.OPACITY,
                keys=(
                    Keyframe(start, base_op, Easing.HOLD),
                    Keyframe(apply_end, style.dropped_opacity, Easing.SMOOTHSTEP),
                    Keyframe(restore_start, style.dropped_opacity, Easing.HOLD),
                    Keyframe(restore_done, base_op, Easing.SMOOTHSTEP),
                    Keyframe(end, base_op, Easing.LINEAR),
                ),
            )
        )
    if not tracks:
        # Nothing sampled; keep a constant track so the directive still
        # owns keys out to its end.
        first = net.eligible_dropout_layers()[0]
        anchor = scene.layer_elements[first][0]
        base_op = scene.get(anchor).style.opacity
        tracks.append(
            Track(
                target=anchor,
                prop=TrackProperty.OPACITY,
                keys=(
                    Keyframe(start, base_op, Easing.HOLD),
                    Keyframe(end, base_op, Easing.LINEAR),
                ),
            )
        )

    tracks.extend(_forward_tracks(net, scene, apply_end, plan, registry))
    return tracks


def compile_animations(
    net: ValidatedNetwork,
    scene: SceneGraph,
    registry: Optional[PairRegistry] = None,
) -> Timeline:
    """Walk the directives, accumulating tracks and segment spans."""
    pd = net.render.pair_duration_s
    layer_count = len(net.layers)
    t = 0.0
    tracks: list[Track] = []
    segments: list[DirectiveSpan] = []
    for di, d in enumerate(net.directives):
        dur = directive_duration(d, layer_count, pd)
        end = t + dur
        if isinstance(d, ForwardPass):
            tracks.extend(_forward_tracks(net, scene, t, None, registry))
        else:
            tracks.extend(_dropout_tracks(net, scene, d, t, end, registry))
        segments.append(DirectiveSpan(di, d.name, t, end))
        t = end
    return Timeline(tracks=tuple(tracks), duration_s=t, segments=tuple(segments))


# ---------------------------------------------------------------------------
# Debug serialization.
# ---------------------------------------------------------------------------

def _key_to_json(k: Keyframe) -> dict:
    value = k.value.hex8() if isinstance(k.value, Color) else k.value
    return {"t": k.t, "value": value, "easing": k.easing.value}


def timeline_to_json(tl: Timeline) -> dict:
    return {
        "duration_s": tl.duration_s,
        "segments": [
            {
                "index": s.index,
                "name": s.name,
                "start_s": s.start_s,
                "end_s": s.end_s,
            }
            for s in tl.segments
        ],
        "tracks": [
            {
                "target": tr.target,
                "prop": tr.prop.value,
                "window_cells": tr.window_cells,
                "window_stride": tr.window_stride,
                "window_cols": tr.window_cols,
                "keys": [_key_to_json(k) for k in tr.keys],
            }
            for tr in tl.tracks
        ],
    }
