"""Easing curve values and clamping."""

import pytest

from nnanim.easing import Easing, ease


def test_linear_identity():
    for u in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert ease(Easing.LINEAR, u) == u


def test_smoothstep_values():
    assert ease(Easing.SMOOTHSTEP, 0.0) == 0.0
    assert ease(Easing.SMOOTHSTEP, 1.0) == 1.0
    assert abs(ease(Easing.SMOOTHSTEP, 0.25) - 0.15625) < 1e-12
    assert abs(ease(Easing.SMOOTHSTEP, 0.5) - 0.5) < 1e-12
    assert abs(ease(Easing.SMOOTHSTEP, 0.75) - 0.84375) < 1e-12


def test_smoothstep_symmetry():
    for u in (0.1, 0.2, 0.3, 0.4):
        assert abs(ease(Easing.SMOOTHSTEP, u) + ease(Easing.SMOOTHSTEP, 1 - u) - 1.0) < 1e-12


def test_hold_is_step_at_end():
    assert ease(Easing.HOLD, 0.0) == 0.0
    assert ease(Easing.HOLD, 0.5) == 0.0
    assert ease(Easing.HOLD, 0.999999) == 0.0
    assert ease(Easing.HOLD, 1.0) == 1.0


def test_clamping():
    for kind in Easing:
        assert ease(kind, -0.5) == 0.0
        assert ease(kind, 1.5) == 1.0


def test_monotone():
    for kind in (Easing.LINEAR, Easing.SMOOTHSTEP):
        prev = -1.0
        for i in range(101):
            v = ease(kind, i / 100)
            assert v >= prev
            prev = v


def test_enum_round_trips_as_string():
    assert Easing("linear") is Easing.LINEAR
    assert Easing("smoothstep") is Easing.SMOOTHSTEP
    assert Easing("hold") is Easing.HOLD
