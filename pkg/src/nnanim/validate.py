"""Network-level validation and size propagation.

Parsing guarantees each layer is well-formed in isolation; this module
checks the network as a whole: adjacency compatibility, spatial size
propagation (stride-1 valid convolution, floor-division pooling), image
sources, and dropout eligibility.  The result is a ValidatedNetwork whose
layers carry everything layout needs: resolved sizes, drawn grid shapes,
and image pixels.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .errors import (
    BadPgm,
    DegenerateConv,
    IncompatiblePair,
    NoDirectives,
    NoEligibleLayers,
    TooFewLayers,
)
from .model import (
    Conv2DLayer,
    Directive,
    Dropout,
    FeedForwardLayer,
    ImageLayer,
    KIND_CONV2D,
    KIND_FF,
    KIND_IMAGE,
    KIND_MAXPOOL2D,
    LayerSpec,
    MaxPool2DLayer,
    NetworkSpec,
    RenderSettings,
    StyleSpec,
)
from .pgm import load_pgm

# Ordered adjacency whitelist: (upstream kind, downstream kind).
COMPATIBLE_PAIRS: frozenset[tuple[str, str]] = frozenset(
    {
        (KIND_IMAGE, KIND_CONV2D),
        (KIND_IMAGE, KIND_FF),
        (KIND_CONV2D, KIND_CONV2D),
        (KIND_CONV2D, KIND_MAXPOOL2D),
        (KIND_CONV2D, KIND_FF),
        (KIND_MAXPOOL2D, KIND_CONV2D),
        (KIND_MAXPOOL2D, KIND_FF),
        (KIND_FF, KIND_FF),
    }
)


def compatible(kind_a: str, kind_b: str) -> bool:
    return (kind_a, kind_b) in COMPATIBLE_PAIRS


def conv_output_size(input_size: int, filter_size: int) -> int:
    """Stride 1, no padding."""
    return input_size - filter_size + 1


def pool_output_size(input_size: int, kernel: int) -> int:
    return input_size // kernel


@dataclass(frozen=True)
class ResolvedLayer:
    """A layer plus everything propagation derived for it.

    grid_rows/grid_cols describe what gets drawn: the declared map side for
    conv layers, the pooled output side for pooling layers, the pixel
    dimensions for images.  input_size/output_size track the propagated
    spatial flow, None for non-spatial layers.
    """

    spec: LayerSpec
    index: int
    input_size: Optional[int] = None
    output_size: Optional[int] = None
    map_count: int = 0
    grid_rows: int = 0
    grid_cols: int = 0
    pixels: Optional[tuple[float, ...]] = None

    @property
    def kind(self) -> str:
        return self.spec.kind


@dataclass(frozen=True)
class ValidatedNetwork:
    layers: tuple[ResolvedLayer, ...]
    directives: tuple[Directive, ...]
    style: StyleSpec
    render: RenderSettings

    @property
    def pair_count(self) -> int:
        return len(self.layers) - 1

    def eligible_dropout_layers(self) -> tuple[int, ...]:
        """Indices of fully-connected layers, excluding the last one."""
        ff = [r.index for r in self.layers if r.kind == KIND_FF]
        return tuple(ff[:-1])


def _resolve_image(layer: ImageLayer, index: int, next_layer, base_dir: str):
    path = layer.source
    if base_dir and not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    grid = load_pgm(path)
    if isinstance(next_layer, Conv2DLayer) and grid.width != grid.height:
        raise BadPgm(
            path,
            f"image feeding a conv2d layer must be square, got "
            f"{grid.width}x{grid.height}",
        )
    out_size = grid.width if grid.width == grid.height else None
    return (
        ResolvedLayer(
            spec=layer,
            index=index,
            output_size=out_size,
            map_count=1,
            grid_rows=grid.height,
            grid_cols=grid.width,
            pixels=grid.values,
        ),
        out_size,
        1,
    )


def validate_network(spec: NetworkSpec, base_dir: str = "") -> ValidatedNetwork:
    """Check the whole network; raises the NetworkValidationError family.

    base_dir anchors relative image paths (typically the spec file's
    directory).
    """
    layers = spec.layers
    if len(layers) < 2:
        raise TooFewLayers(len(layers))
    if not spec.directives:
        raise NoDirectives()

    for i in range(len(layers) - 1):
        a, b = layers[i], layers[i + 1]
        if not compatible(a.kind, b.kind):
            raise IncompatiblePair(i, a.kind, b.kind)

    resolved: list[ResolvedLayer] = []
    size: Optional[int] = None      # propagated spatial side
    channels: Optional[int] = None  # propagated map count

    for i, layer in enumerate(layers):
        if isinstance(layer, ImageLayer):
            nxt = layers[i + 1] if i + 1 < len(layers) else None
            r, size, channels = _resolve_image(layer, i, nxt, base_dir)
            resolved.append(r)
        elif isinstance(layer, Conv2DLayer):
            # A conv leading the network takes its declared size as input.
            input_size = size if size is not None else layer.map_size
            out = conv_output_size(input_size, layer.filter_size)
            if out < 1:
                raise DegenerateConv(
                    i,
                    f"conv2d output {out} from input {input_size} and "
                    f"filter {layer.filter_size}",
                )
            resolved.append(
                ResolvedLayer(
                    spec=layer,
                    index=i,
                    input_size=input_size,
                    output_size=out,
                    map_count=layer.feature_maps,
                    grid_rows=layer.map_size,
                    grid_cols=layer.map_size,
                )
            )
            size, channels = out, layer.feature_maps
        elif isinstance(layer, MaxPool2DLayer):
            if size is None or channels is None:
                raise DegenerateConv(i, "pooling layer has no spatial input")
            out = pool_output_size(size, layer.kernel)
            if out < 1:
                raise DegenerateConv(
                    i,
                    f"maxpool2d output {out} from input {size} and "
                    f"kernel {layer.kernel}",
                )
            resolved.append(
                ResolvedLayer(
                    spec=layer,
                    index=i,
                    input_size=size,
                    output_size=out,
                    map_count=channels,
                    grid_rows=out,
                    grid_cols=out,
                )
            )
            size = out
        elif isinstance(layer, FeedForwardLayer):
            resolved.append(
                ResolvedLayer(spec=layer, index=i, map_count=layer.units)
            )
            size, channels = None, None
        else:
            raise TypeError(f"unknown layer type {type(layer).__name__}")

    net = ValidatedNetwork(
        layers=tuple(resolved),
        directives=spec.directives,
        style=spec.style,
        render=spec.render,
    )
    if any(isinstance(d, Dropout) for d in spec.directives):
        if not net.eligible_dropout_layers():
            raise NoEligibleLayers()
    return net
