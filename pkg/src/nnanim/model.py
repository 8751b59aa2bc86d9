"""Domain types: colors, layer descriptions, directives, settings.

Everything here is a frozen dataclass so parsed specs compare by value and
can be used as dict keys or cached safely.  Range checks live in
__post_init__ and raise TypeMismatch without position info; the parser
re-raises with the offending token's line and column attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

from .errors import TypeMismatch

U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class Color:
    """8-bit RGBA color."""

    r: int
    g: int
    b: int
    a: int = 255

    def __post_init__(self):
        for name in ("r", "g", "b", "a"):
            v = getattr(self, name)
            if not isinstance(v, int) or not 0 <= v <= 255:
                raise TypeMismatch(name, "an integer channel in [0, 255]")

    @classmethod
    def from_hex(cls, text: str) -> "Color":
        """Parse #RRGGBB or #RRGGBBAA (case-insensitive)."""
        body = text.lstrip("#")
        if len(body) == 6:
            body += "FF"
        if len(body) != 8 or any(c not in "0123456789abcdefABCDEF" for c in body):
            raise TypeMismatch("color", "a #RRGGBB or #RRGGBBAA hex color")
        return cls(
            int(body[0:2], 16),
            int(body[2:4], 16),
            int(body[4:6], 16),
            int(body[6:8], 16),
        )

    def hex8(self) -> str:
        return f"#{self.r:02X}{self.g:02X}{self.b:02X}{self.a:02X}"

    def hex6(self) -> str:
        return f"#{self.r:02X}{self.g:02X}{self.b:02X}"

    def rgb(self) -> tuple[int, int, int]:
        return (self.r, self.g, self.b)


# ---------------------------------------------------------------------------
# Layers.
# ---------------------------------------------------------------------------

KIND_IMAGE = "image"
KIND_FF = "ff"
KIND_CONV2D = "conv2d"
KIND_MAXPOOL2D = "maxpool2d"

LAYER_KINDS = (KIND_IMAGE, KIND_FF, KIND_CONV2D, KIND_MAXPOOL2D)


@dataclass(frozen=True)
class ImageLayer:
    """Grayscale input drawn as a pixel grid; source is an ASCII PGM file."""

    source: str
    kind: str = field(default=KIND_IMAGE, init=False)

    def __post_init__(self):
        if not isinstance(self.source, str) or not self.source:
            raise TypeMismatch("source", "a non-empty file path string")


@dataclass(frozen=True)
class FeedForwardLayer:
    """Fully-connected layer drawn as a column of neurons."""

    units: int
    kind: str = field(default=KIND_FF, init=False)

    def __post_init__(self):
        if not isinstance(self.units, int) or self.units < 1:
            raise TypeMismatch("units", "a positive integer")


@dataclass(frozen=True)
class Conv2DLayer:
    """Convolutional layer drawn as a stack of square feature maps.

    Stride 1, no padding: output side = input side - filter_size + 1.
    """

    feature_maps: int
    map_size: int
    filter_size: int
    kind: str = field(default=KIND_CONV2D, init=False)

    def __post_init__(self):
        if not isinstance(self.feature_maps, int) or self.feature_maps < 1:
            raise TypeMismatch("feature_maps", "a positive integer")
        if not isinstance(self.map_size, int) or self.map_size < 1:
            raise TypeMismatch("map_size", "a positive integer")
        if not isinstance(self.filter_size, int) or self.filter_size < 1:
            raise TypeMismatch("filter_size", "a positive integer")
        if self.filter_size > self.map_size:
            raise TypeMismatch("filter_size", "a value no larger than map_size")


@dataclass(frozen=True)
class MaxPool2DLayer:
    """Pooling layer; output side = floor(input side / kernel)."""

    kernel: int
    kind: str = field(default=KIND_MAXPOOL2D, init=False)

    def __post_init__(self):
        if not isinstance(self.kernel, int) or self.kernel < 2:
            raise TypeMismatch("kernel", "an integer of at least 2")


LayerSpec = Union[ImageLayer, FeedForwardLayer, Conv2DLayer, MaxPool2DLayer]


# ---------------------------------------------------------------------------
# Directives.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ForwardPass:
    """Animate activations flowing through every adjacent layer pair."""

    name: str = field(default="forward_pass", init=False)


@dataclass(frozen=True)
class Dropout:
    """Fade out a sampled subset of neurons, run a forward pass, restore."""

    rate: float = 0.2
    seed: int = 0
    name: str = field(default="dropout", init=False)

    def __post_init__(self):
        rate = self.rate
        if isinstance(rate, bool) or not isinstance(rate, (int, float)):
            raise TypeMismatch("rate", "a real number in [0, 1)")
        if not 0.0 <= float(rate) < 1.0:
            raise TypeMismatch("rate", "a real number in [0, 1)")
        object.__setattr__(self, "rate", float(rate))
        if not isinstance(self.seed, int) or not 0 <= self.seed <= U64_MAX:
            raise TypeMismatch("seed", "an unsigned 64-bit integer")


Directive = Union[ForwardPass, Dropout]


# ---------------------------------------------------------------------------
# Settings blocks.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StyleSpec:
    background: Color = Color(0x1C, 0x1C, 0x1C, 0xFF)
    neuron_fill: Color = Color(0x3A, 0x50, 0x6B, 0xFF)
    neuron_stroke: Color = Color(0xFF, 0xFF, 0xFF, 0xFF)
    edge_color: Color = Color(0x8D, 0xA1, 0xB9, 0xFF)
    pulse_color: Color = Color(0xFF, 0xD8, 0x61, 0xFF)
    dropped_opacity: float = 0.15

    def __post_init__(self):
        v = self.dropped_opacity
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TypeMismatch("dropped_opacity", "a real number in [0, 1]")
        if not 0.0 <= float(v) <= 1.0:
            raise TypeMismatch("dropped_opacity", "a real number in [0, 1]")
        object.__setattr__(self, "dropped_opacity", float(v))


VALID_FORMATS = ("svg", "gif")


@dataclass(frozen=True)
class RenderSettings:
    fps: int = 30
    width_px: int = 960
    height_px: int = 540
    pair_duration_s: float = 1.0
    formats: frozenset[str] = frozenset({"svg"})

    def __post_init__(self):
        if not isinstance(self.fps, int) or not 1 <= self.fps <= 120:
            raise TypeMismatch("fps", "an integer in [1, 120]")
        if not isinstance(self.width_px, int) or not 16 <= self.width_px <= 4096:
            raise TypeMismatch("width_px", "an integer in [16, 4096]")
        if not isinstance(self.height_px, int) or not 16 <= self.height_px <= 4096:
            raise TypeMismatch("height_px", "an integer in [16, 4096]")
        pd = self.pair_duration_s
        if isinstance(pd, bool) or not isinstance(pd, (int, float)) or not float(pd) > 0.0:
            raise TypeMismatch("pair_duration_s", "a positive real number")
        object.__setattr__(self, "pair_duration_s", float(pd))
        fmts = frozenset(self.formats)
        if not fmts or any(f not in VALID_FORMATS for f in fmts):
            raise TypeMismatch("formats", 'a non-empty subset of "svg,gif"')
        object.__setattr__(self, "formats", fmts)


# ---------------------------------------------------------------------------
# The whole spec.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NetworkSpec:
    layers: tuple[LayerSpec, ...]
    directives: tuple[Directive, ...]
    style: StyleSpec = StyleSpec()
    render: RenderSettings = RenderSettings()

    def with_render(self, **changes) -> "NetworkSpec":
        return replace(self, render=replace(self.render, **changes))

    def with_dropout_seed(self, seed: int) -> "NetworkSpec":
        """Rewrite the seed of every dropout directive."""
        out = tuple(
            replace(d, seed=seed) if isinstance(d, Dropout) else d
            for d in self.directives
        )
        return replace(self, directives=out)
