"""ASCII PGM (P2) loader for image layers.

Only the plain-text variant is accepted; binary P5 files are rejected with
a reason instead of being half-decoded.  Pixels come back normalized to
[0, 1] so downstream code never sees the file's maxval.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import BadPgm, MissingImageFile


@dataclass(frozen=True)
class GrayscaleGrid:
    """Row-major grayscale pixels, values normalized to [0, 1]."""

    width: int
    height: int
    values: tuple[float, ...]

    def at(self, row: int, col: int) -> float:
        return self.values[row * self.width + col]


def _tokens(text: str):
    """Yield whitespace-separated fields, dropping # comments to end of line."""
    for line in text.split("\n"):
        head = line.split("#", 1)[0]
        yield from head.split()


def load_pgm(path: str) -> GrayscaleGrid:
    if not os.path.exists(path):
        raise MissingImageFile(path)
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise BadPgm(path, f"unreadable: {exc}") from exc

    if raw[:2] == b"P5":
        raise BadPgm(path, "binary P5 format, expected ASCII P2")
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        raise BadPgm(path, "not an ASCII file") from None

    fields = list(_tokens(text))
    if not fields or fields[0] != "P2":
        got = fields[0] if fields else "empty file"
        raise BadPgm(path, f"bad magic {got!r}, expected P2")
    if len(fields) < 4:
        raise BadPgm(path, "truncated header")

    try:
        width, height, maxval = (int(fields[i]) for i in (1, 2, 3))
    except ValueError:
        raise BadPgm(path, "non-integer header field") from None
    if width < 1 or height < 1:
        raise BadPgm(path, f"bad dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise BadPgm(path, f"bad maxval {maxval}")

    body = fields[4:]
    if len(body) != width * height:
        raise BadPgm(
            path, f"expected {width * height} pixels, found {len(body)}"
        )
    values = []
    for field in body:
        try:
            v = int(field)
        except ValueError:
            raise BadPgm(path, f"non-integer pixel {field!r}") from None
        if not 0 <= v <= maxval:
            raise BadPgm(path, f"pixel {v} outside [0, {maxval}]")
        values.append(v / maxval)
    return GrayscaleGrid(width, height, tuple(values))
