"""Fixed-font text recognition for printed pages."""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from scenevoice import imaging
from scenevoice.errors import DegenerateHistogramError
from scenevoice.ocr.font import GLYPH_HEIGHT, GLYPH_WIDTH, Bitmap, GlyphFont, builtin_font
from scenevoice.ocr.segment import TextLine, segment_lines
from scenevoice.raster import Component, Raster

# Matches scoring below this fraction of agreeing cells are rejected.
MATCH_THRESHOLD = 0.7

# Threshold used when the page histogram is flat and no split exists.
FALLBACK_THRESHOLD = 127

# A horizontal gap wider than this fraction of the median glyph width
# separates two words.
SPACE_GAP_RATIO = 0.5


@dataclass(frozen=True)
class OcrConfig:
    """Knobs for the recognition pipeline.

    denoise     -- run a 3x3 median filter after smoothing
    adaptive    -- threshold against a local mean instead of a global split
    window      -- side of the local-mean window (odd, used when adaptive)
    bias        -- offset subtracted from the local mean before comparing
    """

    denoise: bool = False
    adaptive: bool = False
    window: int = 31
    bias: float = 10.0


@dataclass(frozen=True)
class TextBlock:
    """One recognized line of text with its bounding box."""

    text: str
    x1: int
    y1: int
    x2: int
    y2: int
    confidence: float


def preprocess_for_ocr(image: Raster, config: OcrConfig | None = None) -> Raster:
    """Reduce an image to ink-on-black binary form.

    Color input is collapsed to luma first. A small blur always runs so
    single-pixel noise cannot split strokes; the median pass is optional.
    Global thresholding falls back to the midpoint when the page is one
    flat value.
    """
    cfg = config or OcrConfig()
    gray = imaging.to_grayscale(image) if image.channels == 3 else image
    if cfg.denoise:
        gray = imaging.median3(gray)
    gray = imaging.gaussian_blur3(gray)
    if cfg.adaptive:
        return imaging.adaptive_threshold(gray, cfg.window, cfg.bias)
    try:
        t = imaging.otsu_threshold(gray)
    except DegenerateHistogramError:
        t = FALLBACK_THRESHOLD
    return imaging.binarize(gray, t)


def crop(raster: Raster, x1: int, y1: int, x2: int, y2: int) -> Raster:
    """Copy the inclusive pixel box [x1..x2] x [y1..y2] out of a raster."""
    w = x2 - x1 + 1
    rows = []
    stride = raster.width * raster.channels
    for y in range(y1, y2 + 1):
        start = y * stride + x1 * raster.channels
        rows.append(raster.samples[start : start + w * raster.channels])
    return Raster(w, y2 - y1 + 1, raster.channels, b"".join(rows))


def _resample_to_grid(cropped: Raster) -> Bitmap:
    """Nearest-neighbor downsample of a glyph crop onto the 5x7 grid.

    Each grid cell samples the source pixel under its center, mapping cell
    centers onto the crop so any crop size lands on a defined pixel.
    """
    cw, ch = cropped.width, cropped.height
    cells = []
    for i in range(GLYPH_HEIGHT):
        sy = ((2 * i + 1) * ch) // (2 * GLYPH_HEIGHT)
        for j in range(GLYPH_WIDTH):
            sx = ((2 * j + 1) * cw) // (2 * GLYPH_WIDTH)
            cells.append(1 if cropped.samples[sy * cw + sx] else 0)
    return tuple(cells)


def match_glyph(cropped: Raster, font: GlyphFont | None = None) -> tuple[str, float]:
    """Identify the character in a binary glyph crop.

    Returns the best-matching character and the fraction of grid cells that
    agree. Scores below MATCH_THRESHOLD come back as ('?', score). Exact
    score ties resolve to the lowest code point, so matching is independent
    of font file order.
    """
    font = font or builtin_font()
    grid = _resample_to_grid(cropped)
    best_char = "?"
    best_hits = -1
    for char, bitmap in font.items():
        hits = sum(1 for a, b in zip(grid, bitmap) if a == b)
        if hits > best_hits:
            best_char, best_hits = char, hits
    score = best_hits / len(grid)
    if score < MATCH_THRESHOLD:
        return "?", score
    return best_char, score


def _line_text(line: TextLine, binary: Raster, font: GlyphFont) -> tuple[str, float]:
    widths = [g.width for g in line.glyphs]
    median_width = statistics.median(widths)
    parts: list[str] = []
    scores: list[float] = []
    prev: Component | None = None
    for glyph in line.glyphs:
        if prev is not None:
            gap = glyph.x1 - prev.x2 - 1
            if gap > SPACE_GAP_RATIO * median_width:
                parts.append(" ")
        char, score = match_glyph(crop(binary, glyph.x1, glyph.y1, glyph.x2, glyph.y2), font)
        parts.append(char)
        scores.append(score)
        prev = glyph
    return "".join(parts), sum(scores) / len(scores)


def recognize_text(
    image: Raster,
    config: OcrConfig | None = None,
    font: GlyphFont | None = None,
) -> list[TextBlock]:
    """Read printed text from an image, one TextBlock per line.

    The image is binarized, components are grouped into lines, and each
    component is matched against the font. Word gaps re-insert spaces.
    A block's confidence is the mean of its glyph scores.
    """
    font = font or builtin_font()
    binary = preprocess_for_ocr(image, config)
    blocks = []
    for line in segment_lines(binary):
        text, confidence = _line_text(line, binary, font)
        blocks.append(
            TextBlock(
                text=text,
                x1=line.x1,
                y1=line.y1,
                x2=line.x2,
                y2=line.y2,
                confidence=confidence,
            )
        )
    return blocks
