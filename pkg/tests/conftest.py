"""Shared fixtures and small raster/test-corpus helpers."""

from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scenevoice.ocr.font import builtin_font
from scenevoice.raster import Raster

DATA_DIR = Path(__file__).parent / "data"
STUB_DIR = Path(__file__).parent / "stubs"


def make_gray(rng: random.Random, w: int, h: int) -> Raster:
    return Raster(w, h, 1, bytes(rng.randrange(256) for _ in range(w * h)))


def make_rgb(rng: random.Random, w: int, h: int) -> Raster:
    return Raster(w, h, 3, bytes(rng.randrange(256) for _ in range(3 * w * h)))


def make_binary(rng: random.Random, w: int, h: int, fg_chance: float = 0.4) -> Raster:
    samples = bytes(255 if rng.random() < fg_chance else 0 for _ in range(w * h))
    return Raster(w, h, 1, samples)


def salt_pepper(image: Raster, p: float, rng: random.Random) -> Raster:
    """Flip each pixel to pure black or white with probability p."""
    samples = bytearray(image.samples)
    step = image.channels
    for i in range(0, len(samples), step):
        if rng.random() < p:
            v = 255 if rng.random() < 0.5 else 0
            for c in range(step):
                samples[i + c] = v
    return Raster(image.width, image.height, image.channels, bytes(samples))


def stack_pages(top: Raster, bottom: Raster, gap_rows: int, background: int = 0) -> Raster:
    """Stack two single-channel pages vertically with a solid gap band."""
    width = max(top.width, bottom.width)

    def padded_rows(page: Raster) -> bytes:
        rows = bytearray()
        pad = bytes([background]) * (width - page.width)
        for y in range(page.height):
            rows += page.samples[y * page.width : (y + 1) * page.width] + pad
        return bytes(rows)

    gap = bytes([background]) * (width * gap_rows)
    samples = padded_rows(top) + gap + padded_rows(bottom)
    return Raster(width, top.height + gap_rows + bottom.height, 1, samples)


def random_text(rng: random.Random, min_len: int = 1, max_len: int = 20) -> str:
    """Random string over the built-in glyph set, single internal spaces only."""
    charset = builtin_font().chars()
    n = rng.randrange(min_len, max_len + 1)
    out: list[str] = []
    for i in range(n):
        can_space = 0 < i < n - 1 and out[-1] != " "
        if can_space and rng.random() < 0.12:
            out.append(" ")
        else:
            out.append(rng.choice(charset))
    return "".join(out)


@pytest.fixture(scope="session")
def text_corpus() -> list[str]:
    """The 50-string corpus shared by the recognition acceptance checks."""
    rng = random.Random(20260818)
    return [random_text(rng) for _ in range(50)]
