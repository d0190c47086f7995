"""End-to-end text recognition: matching, round trips, robustness."""

from __future__ import annotations

import random

import pytest

from conftest import salt_pepper, stack_pages
from oracles import levenshtein
from scenevoice.ocr.font import GLYPH_CELLS, builtin_font
from scenevoice.ocr.recognize import (
    MATCH_THRESHOLD,
    OcrConfig,
    match_glyph,
    preprocess_for_ocr,
    recognize_text,
)
from scenevoice.ocr.render import render_text_page
from scenevoice.raster import Raster


@pytest.fixture(scope="module")
def font():
    return builtin_font()


def crop_of(bitmap, flip: int | None = None) -> Raster:
    cells = list(bitmap)
    if flip is not None:
        cells[flip] = 1 - cells[flip]
    return Raster(5, 7, 1, bytes(255 if v else 0 for v in cells))


class TestMatchGlyph:
    def test_exact_bitmaps_score_one(self, font):
        for char, bitmap in font.items():
            got, score = match_glyph(crop_of(bitmap), font)
            assert (got, score) == (char, 1.0)

    def test_single_flip_still_matches_a(self, font):
        # 'A' sits at Hamming distance >= 3 from every other glyph, so any
        # one-cell defect leaves it the unique best match.
        bitmap = font.bitmap("A")
        for flip in range(GLYPH_CELLS):
            got, score = match_glyph(crop_of(bitmap, flip), font)
            assert got == "A"
            assert score == pytest.approx(34 / 35)

    def test_unrecognizable_crop_rejected(self, font):
        got, score = match_glyph(Raster.gray(5, 7, 255), font)
        assert got == "?"
        assert score < MATCH_THRESHOLD

    def test_scaled_crop_matches(self, font):
        page = render_text_page("K", font, scale=4, margin=0)
        got, score = match_glyph(page, font)
        assert (got, score) == ("K", 1.0)


class TestRoundTrip:
    @pytest.mark.parametrize("scale", [1, 2, 3, 4, 5, 6])
    def test_every_glyph_at_margin_zero(self, font, scale):
        for char in font.chars():
            page = render_text_page(char, font, scale=scale, margin=0)
            (block,) = recognize_text(page)
            assert block.text == char
            assert block.confidence == 1.0

    @pytest.mark.parametrize("scale", [2, 3, 4, 5, 6])
    def test_every_glyph_at_default_margin(self, font, scale):
        for char in font.chars():
            page = render_text_page(char, font, scale=scale)
            (block,) = recognize_text(page)
            assert block.text == char
            assert block.confidence == 1.0

    @pytest.mark.parametrize("margin", [0, 1, 2, 3, 5, 8])
    def test_margin_invariance(self, font, margin):
        page = render_text_page("MARGIN TEST 5", font, scale=3, margin=margin)
        (block,) = recognize_text(page)
        assert block.text == "MARGIN TEST 5"

    def test_sentence_with_punctuation(self, font):
        text = "WAIT, WHAT?! IT IS 9:45."
        (block,) = recognize_text(render_text_page(text, font, scale=2))
        assert block.text == text
        assert block.confidence == 1.0

    def test_colored_page_binarizes_identically(self, font):
        text = "COLOR CHECK 33"
        gray = render_text_page(text, font, scale=3)
        color = render_text_page(
            text, font, scale=3, ink=(255, 255, 255), background=(0, 0, 139)
        )
        assert preprocess_for_ocr(color).samples == preprocess_for_ocr(gray).samples
        (block,) = recognize_text(color)
        assert (block.text, block.confidence) == (text, 1.0)

    def test_dark_ink_on_light_background(self, font):
        page = render_text_page("DARK ON LIGHT", font, scale=3, ink=20, background=235)
        (block,) = recognize_text(page)
        assert block.text == "DARK ON LIGHT"

    def test_two_line_page_reads_top_to_bottom(self, font):
        top = render_text_page("FIRST LINE", font, scale=2, margin=0)
        bottom = render_text_page("SECOND", font, scale=2, margin=0)
        page = stack_pages(top, bottom, gap_rows=8)
        blocks = recognize_text(page)
        assert [b.text for b in blocks] == ["FIRST LINE", "SECOND"]

    def test_block_bbox_covers_ink(self, font):
        page = render_text_page("BOX", font, scale=2, margin=4)
        (block,) = recognize_text(page)
        assert block.x1 >= 3 and block.y1 >= 3  # blur halo may extend one pixel
        assert block.x2 < page.width and block.y2 < page.height

    def test_deterministic(self, font):
        page = render_text_page("SAME INPUT", font, scale=2)
        assert recognize_text(page) == recognize_text(page)


class TestRobustness:
    def test_blank_page_yields_nothing(self):
        assert recognize_text(Raster.gray(40, 20, 0)) == []
        assert recognize_text(Raster.gray(40, 20, 200)) == []

    def test_denoise_survives_salt_and_pepper(self, font):
        rng = random.Random(4242)
        text = "NOISY PAGE 123 TEST"
        noisy = salt_pepper(render_text_page(text, font, scale=3), 0.02, rng)
        blocks = recognize_text(noisy, OcrConfig(denoise=True))
        got = " ".join(b.text for b in blocks)
        accuracy = 1 - levenshtein(got, text) / len(text)
        assert accuracy >= 0.9

    def test_adaptive_beats_global_under_illumination_gradient(self, font):
        text = "GRADIENT CHECK 7"
        page = render_text_page(text, font, scale=4, ink=0, background=255)
        w, h = page.width, page.height
        samples = bytearray(page.samples)
        for y in range(h):
            for x in range(w):
                shade = int(170 * (1 - x / (w - 1)))
                i = y * w + x
                samples[i] = max(0, samples[i] - shade)
        lit = Raster(w, h, 1, bytes(samples))
        global_blocks = recognize_text(lit)
        adaptive_blocks = recognize_text(lit, OcrConfig(adaptive=True))
        assert " ".join(b.text for b in global_blocks) != text
        assert [b.text for b in adaptive_blocks] == [text]
        assert adaptive_blocks[0].confidence == 1.0

    def test_random_noise_only_page_mostly_rejected(self):
        rng = random.Random(7)
        samples = bytes(255 if rng.random() < 0.5 else 0 for _ in range(60 * 30))
        blocks = recognize_text(Raster(60, 30, 1, samples))
        text = "".join(b.text for b in blocks)
        assert text.count("?") >= len(text) // 2 or text == ""
