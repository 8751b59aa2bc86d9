"""End-to-end orchestration: text in, artifacts out.

Holds the override precedence shared by the CLI and the HTTP service
(explicit fps/width/height beat a quality preset, which beats the spec's
render block, which beats the defaults), the thread pool controlled by
NNANIM_THREADS, and the GIF fallback that retries without antialiasing
when the palette overflows 256 colors.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .dsl import parse_network_spec
from .errors import PaletteOverflow, UsageError
from .gif import encode_gif
from .layout import SceneGraph, layout_network
from .model import NetworkSpec
from .raster import PixelGrid, rasterize
from .sampling import Frame, frame_times, sample_at
from .svg import emit_svg
from .timeline import Timeline, compile_animations
from .validate import ValidatedNetwork, validate_network

THREADS_ENV = "NNANIM_THREADS"

# Quality presets: fps, width, height.
QUALITY_PRESETS = {
    "l": (15, 480, 270),
    "m": (30, 960, 540),
    "h": (60, 1920, 1080),
}

FRAME_NAME = "frame_%06d.svg"
GIF_NAME = "animation.gif"


@dataclass(frozen=True)
class Overrides:
    quality: Optional[str] = None
    fps: Optional[int] = None
    width_px: Optional[int] = None
    height_px: Optional[int] = None
    formats: Optional[frozenset[str]] = None
    seed: Optional[int] = None


def apply_overrides(spec: NetworkSpec, ov: Overrides) -> NetworkSpec:
    fps = spec.render.fps
    width = spec.render.width_px
    height = spec.render.height_px
    if ov.quality is not None:
        if ov.quality not in QUALITY_PRESETS:
            raise UsageError(f"unknown quality preset {ov.quality!r}")
        fps, width, height = QUALITY_PRESETS[ov.quality]
    if ov.fps is not None:
        fps = ov.fps
    if ov.width_px is not None:
        width = ov.width_px
    if ov.height_px is not None:
        height = ov.height_px
    formats = ov.formats if ov.formats is not None else spec.render.formats
    spec = spec.with_render(
        fps=fps, width_px=width, height_px=height, formats=formats
    )
    if ov.seed is not None:
        spec = spec.with_dropout_seed(ov.seed)
    return spec


@dataclass(frozen=True)
class Build:
    """A compiled spec: everything needed to sample and render frames."""

    spec: NetworkSpec
    net: ValidatedNetwork
    scene: SceneGraph
    timeline: Timeline

    @property
    def frame_count(self) -> int:
        return len(frame_times(self.timeline.duration_s, self.spec.render.fps))

    def frames(self) -> list[Frame]:
        times = frame_times(self.timeline.duration_s, self.spec.render.fps)
        return [
            sample_at(self.timeline, self.scene, t, index=i)
            for i, t in enumerate(times)
        ]


def build_from_text(
    text: str, base_dir: str = "", overrides: Optional[Overrides] = None
) -> Build:
    spec = parse_network_spec(text)
    if overrides is not None:
        spec = apply_overrides(spec, overrides)
    net = validate_network(spec, base_dir)
    scene = layout_network(net)
    timeline = compile_animations(net, scene)
    return Build(spec=spec, net=net, scene=scene, timeline=timeline)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def render_svg_strings(build: Build) -> list[str]:
    r = build.spec.render
    return [
        emit_svg(f, build.scene.view_box, r.width_px, r.height_px, build.net.style)
        for f in build.frames()
    ]


def render_pixel_frames(build: Build, supersample: int = 2) -> list[PixelGrid]:
    r = build.spec.render
    frames = build.frames()

    def one(frame: Frame) -> PixelGrid:
        return rasterize(
            frame,
            build.scene.view_box,
            r.width_px,
            r.height_px,
            build.net.style,
            supersample=supersample,
        )

    workers = thread_count()
    if workers == 1 or len(frames) == 1:
        return [one(f) for f in frames]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, frames))


def render_gif(build: Build) -> tuple[bytes, int]:
    """Encode the animation; returns (bytes, supersample level used).

    A palette past 256 colors falls back to aliased 1x rendering, which
    bounds the distinct-color count by the scene's flat color set; if even
    that overflows, the error propagates.
    """
    frames = render_pixel_frames(build, supersample=2)
    try:
        return encode_gif(frames, build.spec.render.fps), 2
    except PaletteOverflow:
        frames = render_pixel_frames(build, supersample=1)
        return encode_gif(frames, build.spec.render.fps), 1


@dataclass(frozen=True)
class ArtifactSummary:
    kind: str
    path: str
    frames: int
    duration_s: float
    size_bytes: int
    notes: tuple[str, ...] = field(default_factory=tuple)


def write_artifacts(
    build: Build, out_dir: str, dump_debug: bool = False
) -> list[ArtifactSummary]:
    os.makedirs(out_dir, exist_ok=True)
    formats = build.spec.render.formats
    duration = build.timeline.duration_s
    summaries: list[ArtifactSummary] = []

    if "svg" in formats:
        docs = render_svg_strings(build)
        total = 0
        for i, doc in enumerate(docs):
            path = os.path.join(out_dir, FRAME_NAME % i)
            data = doc.encode("utf-8")
            with open(path, "wb") as fh:
                fh.write(data)
            total += len(data)
        summaries.append(
            ArtifactSummary(
                kind="svg",
                path=out_dir,
                frames=len(docs),
                duration_s=duration,
                size_bytes=total,
            )
        )

    if "gif" in formats:
        data, used = render_gif(build)
        path = os.path.join(out_dir, GIF_NAME)
        with open(path, "wb") as fh:
            fh.write(data)
        notes = () if used == 2 else ("palette overflow: rendered without antialiasing",)
        summaries.append(
            ArtifactSummary(
                kind="gif",
                path=path,
                frames=build.frame_count,
                duration_s=duration,
                size_bytes=len(data),
                notes=notes,
            )
        )

    if dump_debug:
        import json

        from .layout import scene_to_json
        from .timeline import timeline_to_json

        for name, payload in (
            ("scene.json", scene_to_json(build.scene)),
            ("timeline.json", timeline_to_json(build.timeline)),
        ):
            with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")

    return summaries
