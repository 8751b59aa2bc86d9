"""GIF89a writer with variable-width LZW compression.

Frames share one global color table built from the exact set of distinct
RGB colors across the whole sequence, padded to a power of two; more than
256 distinct colors raises PaletteOverflow so callers can retry with less
antialiasing.  The stream loops forever via the Netscape extension.  All
multi-byte fields are little-endian; LZW codes pack LSB-first and the
code width grows as the table fills, resetting at 4096 entries.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import PaletteOverflow
from .raster import PixelGrid

MAX_TABLE = 4096


class _BitWriter:
    """Packs variable-width codes LSB-first into a byte stream."""

    def __init__(self):
        self.out = bytearray()
        self.acc = 0
        self.bits = 0

    def write(self, code: int, width: int):
        self.acc |= code << self.bits
        self.bits += width
        while self.bits >= 8:
            self.out.append(self.acc & 0xFF)
            self.acc >>= 8
            self.bits -= 8

    def flush(self) -> bytes:
        if self.bits:
            self.out.append(self.acc & 0xFF)
            self.acc = 0
            self.bits = 0
        return bytes(self.out)


def lzw_compress(indices, min_code_size: int) -> bytes:
    """Compress palette indices per the GIF flavor of LZW.

    Emits an initial clear code, grows the code width when the table
    reaches the current width's capacity, and resets with a clear code at
    4096 entries.
    """
    clear = 1 << min_code_size
    end = clear + 1
    writer = _BitWriter()

    def fresh():
        return {}, end + 1, min_code_size + 1

    table, next_code, width = fresh()
    writer.write(clear, width)

    it = iter(indices)
    try:
        current = int(next(it))
    except StopIteration:
        writer.write(end, width)
        return writer.flush()

    for sym in it:
        sym = int(sym)
        key = (current << 8) | sym
        found = table.get(key)
        if found is not None:
            current = found
            continue
        writer.write(current, width)
        # The decoder's table lags one entry behind, so the width bump
        # lands after emitting the code that fills the current capacity.
        if next_code >= (1 << width) and width < 12:
            width += 1
        if next_code == MAX_TABLE:
            writer.write(clear, width)
            table, next_code, width = fresh()
        else:
            table[key] = next_code
            next_code += 1
        current = sym

    writer.write(current, width)
    writer.write(end, width)
    return writer.flush()


def _sub_blocks(data: bytes) -> bytes:
    out = bytearray()
    for i in range(0, len(data), 255):
        chunk = data[i : i + 255]
        out.append(len(chunk))
        out.extend(chunk)
    out.append(0)
    return bytes(out)


def _packed_colors(rgba: np.ndarray) -> np.ndarray:
    rgb = rgba[:, :, :3].astype(np.uint32)
    return (rgb[:, :, 0] << 16) | (rgb[:, :, 1] << 8) | rgb[:, :, 2]


def build_palette(frames: list[PixelGrid]) -> np.ndarray:
    """Distinct RGB colors across all frames, sorted ascending as packed ints."""
    seen = [np.unique(_packed_colors(f.rgba)) for f in frames]
    palette = np.unique(np.concatenate(seen))
    if palette.shape[0] > 256:
        raise PaletteOverflow(int(palette.shape[0]))
    return palette


def frame_delay_cs(fps: int) -> int:
    """Per-frame delay in centiseconds (banker's rounding, floor 1)."""
    return max(1, round(100 / fps))


def encode_gif(frames: list[PixelGrid], fps: int) -> bytes:
    """Encode rasterized frames as a looping GIF89a byte stream."""
    if not frames:
        raise ValueError("no frames to encode")
    w, h = frames[0].width, frames[0].height
    for f in frames:
        if (f.width, f.height) != (w, h):
            raise ValueError("frames differ in size")

    palette = build_palette(frames)
    count = palette.shape[0]
    table_bits = 1
    while (1 << table_bits) < count:
        table_bits += 1
    table_size = 1 << table_bits
    min_code_size = max(2, table_bits)

    out = bytearray()
    out.extend(b"GIF89a")
    out.extend(struct.pack("<HHBBB", w, h, 0xF0 | (table_bits - 1), 0, 0))
    for packed in palette:
        out.extend(
            bytes(((packed >> 16) & 0xFF, (packed >> 8) & 0xFF, packed & 0xFF))
        )
    out.extend(b"\x00\x00\x00" * (table_size - count))

    out.extend(b"\x21\xff\x0bNETSCAPE2.0\x03\x01\x00\x00\x00")

    delay = frame_delay_cs(fps)
    for f in frames:
        out.extend(b"\x21\xf9\x04")
        out.extend(struct.pack("<BHBB", 0x04, delay, 0, 0))
        out.extend(b"\x2c")
        out.extend(struct.pack("<HHHHB", 0, 0, w, h, 0))
        indices = np.searchsorted(palette, _packed_colors(f.rgba).ravel())
        out.append(min_code_size)
        out.extend(_sub_blocks(lzw_compress(indices, min_code_size)))
    out.extend(b"\x3b")
    return bytes(out)
