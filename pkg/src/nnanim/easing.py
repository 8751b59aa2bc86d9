"""Easing curves for keyframe interpolation.

Each curve maps normalized progress u in [0, 1] to eased progress.  Hold
is a step function: the previous key's value applies for the whole
interval and the new value lands exactly at the keyframe time.
"""

from __future__ import annotations

from enum import Enum


class Easing(str, Enum):
    LINEAR = "linear"
    SMOOTHSTEP = "smoothstep"
    HOLD = "hold"


def linear(u: float) -> float:
    return u


def smoothstep(u: float) -> float:
    return u * u * (3.0 - 2.0 * u)


def hold(u: float) -> float:
    return 1.0 if u >= 1.0 else 0.0


_CURVES = {
    Easing.LINEAR: linear,
    Easing.SMOOTHSTEP: smoothstep,
    Easing.HOLD: hold,
}


def ease(kind: Easing, u: float) -> float:
    """Evaluate an easing curve; u is clamped to [0, 1] first."""
    u = 0.0 if u < 0.0 else 1.0 if u > 1.0 else u
    return _CURVES[kind](u)
