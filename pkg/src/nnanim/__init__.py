"""Declarative neural-network animation compiler and renderer.

Parse a textual network description plus animation directives, compile a
deterministic keyframe timeline, and render it as SVG frame sequences or
animated GIFs.
"""

__version__ = "0.1.0"

from .dsl import parse_network_spec, serialize_spec
from .layout import LayoutConfig, layout_network
from .model import NetworkSpec
from .pipeline import Build, Overrides, build_from_text, write_artifacts
from .sampling import frame_times, sample_at
from .timeline import compile_animations, plan_dropout
from .validate import validate_network

__all__ = [
    "__version__",
    "parse_network_spec",
    "serialize_spec",
    "NetworkSpec",
    "LayoutConfig",
    "layout_network",
    "validate_network",
    "compile_animations",
    "plan_dropout",
    "frame_times",
    "sample_at",
    "Build",
    "Overrides",
    "build_from_text",
    "write_artifacts",
]
