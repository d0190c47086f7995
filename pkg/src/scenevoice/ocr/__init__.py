"""Printed-text recognition: font, renderer, segmentation, matching."""

from __future__ import annotations

from scenevoice.ocr.external import external_ocr
from scenevoice.ocr.font import GLYPH_HEIGHT, GLYPH_WIDTH, GlyphFont, builtin_font, load_font, parse_font
from scenevoice.ocr.recognize import (
    MATCH_THRESHOLD,
    OcrConfig,
    TextBlock,
    crop,
    match_glyph,
    preprocess_for_ocr,
    recognize_text,
)
from scenevoice.ocr.render import render_text_page
from scenevoice.ocr.segment import TextLine, segment_lines

__all__ = [
    "GLYPH_HEIGHT",
    "GLYPH_WIDTH",
    "GlyphFont",
    "MATCH_THRESHOLD",
    "OcrConfig",
    "TextBlock",
    "TextLine",
    "builtin_font",
    "crop",
    "external_ocr",
    "load_font",
    "match_glyph",
    "parse_font",
    "preprocess_for_ocr",
    "recognize_text",
    "render_text_page",
    "segment_lines",
]
