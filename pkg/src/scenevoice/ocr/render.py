"""Render text pages from the bitmap font.

Used to build fixtures, demos, and the recognizer's own test corpus. Glyphs
occupy 5-column cells on a 6-column advance (one empty column between
characters); a space is an empty cell with the same advance.
"""

from __future__ import annotations

from scenevoice.errors import InvalidInputError
from scenevoice.ocr.font import GLYPH_HEIGHT, GLYPH_WIDTH, GlyphFont
from scenevoice.raster import Raster

Color = int | tuple[int, int, int]


def _as_channels(value: Color) -> tuple[int, ...]:
    if isinstance(value, int):
        return (value,)
    if len(value) == 3:
        return tuple(value)
    raise InvalidInputError(f"color must be an int or an RGB triple, got {value!r}")


def render_text_page(
    text: str,
    font: GlyphFont,
    scale: int = 2,
    margin: int | None = None,
    ink: Color = 255,
    background: Color = 0,
) -> Raster:
    """Render one line of text; pass int levels for gray, RGB triples for color."""
    if scale < 1:
        raise InvalidInputError(f"scale must be >= 1, got {scale}")
    if not text:
        raise InvalidInputError("cannot render empty text")
    ink_px = _as_channels(ink)
    bg_px = _as_channels(background)
    if len(ink_px) != len(bg_px):
        raise InvalidInputError("ink and background must have the same channel count")
    channels = len(ink_px)
    if margin is None:
        margin = 2 * scale

    n = len(text)
    width = 2 * margin + (6 * n - 1) * scale
    height = 2 * margin + GLYPH_HEIGHT * scale
    row_stride = width * channels
    buf = bytearray(bytes(bg_px) * (width * height))

    for idx, char in enumerate(text):
        if char == " ":
            continue
        bitmap = font.bitmap(char)  # raises for unsupported characters
        cell_x = margin + idx * 6 * scale
        for gy in range(GLYPH_HEIGHT):
            for gx in range(GLYPH_WIDTH):
                if not bitmap[gy * GLYPH_WIDTH + gx]:
                    continue
                for sy in range(scale):
                    y = margin + gy * scale + sy
                    base = y * row_stride + (cell_x + gx * scale) * channels
                    for sx in range(scale):
                        off = base + sx * channels
                        buf[off : off + channels] = bytes(ink_px)
    return Raster(width, height, channels, bytes(buf))
