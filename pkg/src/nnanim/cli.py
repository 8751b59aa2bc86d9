"""Command-line interface.

    nnanim render spec.nn --out frames --quality m --format svg,gif

Exit codes: 0 success, 2 usage, 3 spec syntax error, 4 network validation
error, 5 file io error, 6 render error.  Explicit --fps/--width/--height
beat --quality, which beats the spec's render block.  Diagnostics go to
stderr with line and column; summaries go to stdout.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .errors import (
    NetworkValidationError,
    ParseError,
    RenderError,
    UsageError,
)
from .model import U64_MAX
from .pipeline import Overrides, build_from_text, write_artifacts

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SYNTAX = 3
EXIT_VALIDATION = 4
EXIT_IO = 5
EXIT_RENDER = 6


def _ranged_int(name: str, lo: int, hi: int):
    def convert(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer")
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{name} must be in [{lo}, {hi}]")
        return v

    return convert


def _format_list(text: str) -> frozenset[str]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p not in ("svg", "gif") for p in parts):
        raise argparse.ArgumentTypeError(
            'format must be a comma-separated subset of "svg,gif"'
        )
    return frozenset(parts)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nnanim",
        description="Compile network animation specs to SVG frames and GIFs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render = sub.add_parser("render", help="render a spec file to artifacts")
    render.add_argument("spec", help="path to the spec file")
    render.add_argument(
        "--out", default="out", help="output directory (default: out)"
    )
    render.add_argument(
        "--quality",
        choices=("l", "m", "h"),
        help="preset: l=480x270@15, m=960x540@30, h=1920x1080@60",
    )
    render.add_argument(
        "--fps", type=_ranged_int("fps", 1, 120), help="frames per second"
    )
    render.add_argument(
        "--width", type=_ranged_int("width", 16, 4096), help="output width in px"
    )
    render.add_argument(
        "--height", type=_ranged_int("height", 16, 4096), help="output height in px"
    )
    render.add_argument(
        "--format",
        type=_format_list,
        help='comma-separated output formats from "svg,gif"',
    )
    render.add_argument(
        "--seed",
        type=_ranged_int("seed", 0, U64_MAX),
        help="override the seed of every dropout directive",
    )
    render.add_argument(
        "--dump-debug",
        action="store_true",
        help="also write scene.json and timeline.json",
    )
    return parser


def _run_render(args: argparse.Namespace) -> int:
    import os

    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.spec}: {exc}", file=sys.stderr)
        return EXIT_IO

    overrides = Overrides(
        quality=args.quality,
        fps=args.fps,
        width_px=args.width,
        height_px=args.height,
        formats=args.format,
        seed=args.seed,
    )
    base_dir = os.path.dirname(os.path.abspath(args.spec))

    try:
        build = build_from_text(text, base_dir=base_dir, overrides=overrides)
    except ParseError as exc:
        print(
            f"error: line {exc.line}, column {exc.column}: {exc.message}",
            file=sys.stderr,
        )
        return EXIT_SYNTAX
    except NetworkValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        summaries = write_artifacts(build, args.out, dump_debug=args.dump_debug)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RENDER
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    for s in summaries:
        for note in s.notes:
            print(f"note: {note}", file=sys.stderr)
        print(
            f"wrote {s.path}: {s.frames} frames, "
            f"{s.duration_s:.3f}s, {s.size_bytes} bytes"
        )
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command == "render":
        return _run_render(args)
    parser.print_usage(sys.stderr)
    return EXIT_USAGE


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
