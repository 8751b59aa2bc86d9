"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .model import U64_MAX


class RenderRequest(BaseModel):
    """A spec plus the same overrides the CLI accepts."""

    spec: str = Field(description="network spec source text")
    quality: Optional[Literal["l", "m", "h"]] = None
    fps: Optional[int] = Field(default=None, ge=1, le=120)
    width_px: Optional[int] = Field(default=None, ge=16, le=4096)
    height_px: Optional[int] = Field(default=None, ge=16, le=4096)
    seed: Optional[int] = Field(default=None, ge=0, le=U64_MAX)


class ValidateRequest(BaseModel):
    spec: str


class LayerInfo(BaseModel):
    index: int
    kind: str
    elements: int
    input_size: Optional[int] = None
    output_size: Optional[int] = None


class SpecError(BaseModel):
    error: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None


class ValidateResponse(BaseModel):
    valid: bool
    layers: list[LayerInfo] = []
    error: Optional[SpecError] = None


class SegmentInfo(BaseModel):
    index: int
    name: str
    start_s: float
    end_s: float


class TimelineResponse(BaseModel):
    duration_s: float
    fps: int
    frame_count: int
    track_count: int
    segments: list[SegmentInfo]


class HealthResponse(BaseModel):
    status: str
    version: str
