"""HTTP rendering service wrapping the core pipeline.

Run with:  uvicorn nnanim.service:app

Endpoints take spec source text in the request body, so the service stays
stateless; image layers need absolute source paths readable by the server
process.  Spec problems come back as structured 400 responses carrying
the same line/column diagnostics the CLI prints.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query, Response

from . import __version__
from .errors import (
    NetworkValidationError,
    ParseError,
    RenderError,
    UsageError,
)
from .pipeline import Build, Overrides, build_from_text, render_gif
from .sampling import frame_times, sample_at
from .schemas import (
    HealthResponse,
    LayerInfo,
    RenderRequest,
    SegmentInfo,
    SpecError,
    TimelineResponse,
    ValidateRequest,
    ValidateResponse,
)
from .svg import emit_svg

app = FastAPI(title="nnanim", version=__version__)


def _spec_error(exc: Exception) -> SpecError:
    if isinstance(exc, ParseError):
        return SpecError(
            error=type(exc).__name__,
            message=exc.message,
            line=exc.line,
            column=exc.column,
        )
    return SpecError(error=type(exc).__name__, message=str(exc))


def _build_or_400(req: RenderRequest) -> Build:
    overrides = Overrides(
        quality=req.quality,
        fps=req.fps,
        width_px=req.width_px,
        height_px=req.height_px,
        seed=req.seed,
    )
    try:
        return build_from_text(req.spec, overrides=overrides)
    except (ParseError, NetworkValidationError, UsageError) as exc:
        raise HTTPException(
            status_code=400, detail=_spec_error(exc).model_dump()
        ) from exc


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/validate", response_model=ValidateResponse)
def validate(req: ValidateRequest) -> ValidateResponse:
    try:
        build = build_from_text(req.spec)
    except (ParseError, NetworkValidationError) as exc:
        return ValidateResponse(valid=False, error=_spec_error(exc))
    layers = [
        LayerInfo(
            index=r.index,
            kind=r.kind,
            elements=r.map_count,
            input_size=r.input_size,
            output_size=r.output_size,
        )
        for r in build.net.layers
    ]
    return ValidateResponse(valid=True, layers=layers)


@app.post("/timeline", response_model=TimelineResponse)
def timeline(req: RenderRequest) -> TimelineResponse:
    build = _build_or_400(req)
    tl = build.timeline
    return TimelineResponse(
        duration_s=tl.duration_s,
        fps=build.spec.render.fps,
        frame_count=build.frame_count,
        track_count=len(tl.tracks),
        segments=[
            SegmentInfo(
                index=s.index, name=s.name, start_s=s.start_s, end_s=s.end_s
            )
            for s in tl.segments
        ],
    )


@app.post("/render/gif")
def render_gif_endpoint(req: RenderRequest) -> Response:
    build = _build_or_400(req)
    try:
        data, _ = render_gif(build)
    except (RenderError, UsageError) as exc:
        raise HTTPException(
            status_code=400, detail=_spec_error(exc).model_dump()
        ) from exc
    return Response(content=data, media_type="image/gif")


@app.post("/render/svg")
def render_svg_endpoint(
    req: RenderRequest, frame: int = Query(default=0, ge=0)
) -> Response:
    build = _build_or_400(req)
    times = frame_times(build.timeline.duration_s, build.spec.render.fps)
    if frame >= len(times):
        raise HTTPException(
            status_code=400,
            detail={
                "error": "FrameOutOfRange",
                "message": f"frame {frame} outside [0, {len(times)})",
            },
        )
    sampled = sample_at(build.timeline, build.scene, times[frame], index=frame)
    doc = emit_svg(
        sampled,
        build.scene.view_box,
        build.spec.render.width_px,
        build.spec.render.height_px,
        build.net.style,
    )
    return Response(content=doc, media_type="image/svg+xml")
