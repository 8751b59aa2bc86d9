"""Override precedence, threading, and artifact writing."""

import os

import pytest

from nnanim.errors import UsageError
from nnanim.model import Dropout
from nnanim.pipeline import (
    QUALITY_PRESETS,
    Overrides,
    apply_overrides,
    build_from_text,
    render_gif,
    render_pixel_frames,
    render_svg_strings,
    thread_count,
    write_artifacts,
)
from nnanim.dsl import parse_network_spec

from conftest import read_corpus


SPEC = read_corpus("v02_ff_chain.nn")  # fps 10, 160x90, pd 0.5


def test_presets_table():
    assert QUALITY_PRESETS == {
        "l": (15, 480, 270),
        "m": (30, 960, 540),
        "h": (60, 1920, 1080),
    }


def test_no_overrides_keeps_spec_values():
    spec = parse_network_spec(SPEC)
    out = apply_overrides(spec, Overrides())
    assert out == spec


def test_quality_preset_replaces_all_three():
    spec = parse_network_spec(SPEC)
    out = apply_overrides(spec, Overrides(quality="h"))
    assert (out.render.fps, out.render.width_px, out.render.height_px) == (
        60,
        1920,
        1080,
    )
    assert out.render.pair_duration_s == 0.5  # untouched


def test_explicit_beats_preset():
    spec = parse_network_spec(SPEC)
    out = apply_overrides(spec, Overrides(quality="h", fps=24, height_px=600))
    assert out.render.fps == 24
    assert out.render.width_px == 1920
    assert out.render.height_px == 600


def test_formats_override():
    spec = parse_network_spec(SPEC)
    out = apply_overrides(spec, Overrides(formats=frozenset({"gif"})))
    assert out.render.formats == frozenset({"gif"})


def test_seed_override_rewrites_dropout():
    spec = parse_network_spec(SPEC)
    out = apply_overrides(spec, Overrides(seed=123))
    seeds = [d.seed for d in out.directives if isinstance(d, Dropout)]
    assert seeds == [123]


def test_unknown_preset_rejected():
    spec = parse_network_spec(SPEC)
    with pytest.raises(UsageError):
        apply_overrides(spec, Overrides(quality="ultra"))


def test_build_frame_count():
    build = build_from_text(SPEC)
    # dropout 1.5 s + forward 1.0 s at 10 fps.
    assert build.timeline.duration_s == 2.5
    assert build.frame_count == 25
    assert len(build.frames()) == 25


def test_thread_count_env(monkeypatch):
    monkeypatch.delenv("NNANIM_THREADS", raising=False)
    assert thread_count() >= 1
    monkeypatch.setenv("NNANIM_THREADS", "2")
    assert thread_count() == 2
    monkeypatch.setenv("NNANIM_THREADS", "0")
    with pytest.raises(UsageError):
        thread_count()
    monkeypatch.setenv("NNANIM_THREADS", "lots")
    with pytest.raises(UsageError):
        thread_count()


def test_svg_strings_deterministic():
    a = render_svg_strings(build_from_text(SPEC))
    b = render_svg_strings(build_from_text(SPEC))
    assert a == b
    assert len(a) == 25


def test_parallel_raster_matches_serial(monkeypatch):
    build = build_from_text(SPEC)
    monkeypatch.setenv("NNANIM_THREADS", "1")
    serial = render_pixel_frames(build)
    monkeypatch.setenv("NNANIM_THREADS", "4")
    parallel = render_pixel_frames(build)
    assert len(serial) == len(parallel) == 25
    for s, p in zip(serial, parallel):
        assert s.tobytes() == p.tobytes()


def test_render_gif_returns_supersample_level():
    build = build_from_text(read_corpus("v12_gif_only.nn"))
    data, used = render_gif(build)
    assert data.startswith(b"GIF89a")
    assert used in (1, 2)


def test_write_artifacts_svg(tmp_path):
    build = build_from_text(SPEC)
    summaries = write_artifacts(build, str(tmp_path / "o"))
    assert len(summaries) == 1
    s = summaries[0]
    assert s.kind == "svg"
    assert s.frames == 25
    assert s.duration_s == 2.5
    files = sorted(os.listdir(tmp_path / "o"))
    assert len(files) == 25
    total = sum(os.path.getsize(tmp_path / "o" / f) for f in files)
    assert s.size_bytes == total


def test_write_artifacts_debug_dumps(tmp_path):
    build = build_from_text(SPEC)
    write_artifacts(build, str(tmp_path / "o"), dump_debug=True)
    import json

    with open(tmp_path / "o" / "scene.json") as fh:
        scene = json.load(fh)
    with open(tmp_path / "o" / "timeline.json") as fh:
        tl = json.load(fh)
    assert scene["primitives"]
    assert tl["duration_s"] == 2.5
    assert tl["tracks"]
