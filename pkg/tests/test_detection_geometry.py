"""Box overlap and letterbox coordinate mapping."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from scenevoice.detection.geometry import (
    Box,
    letterbox_transform,
    map_from_source,
    map_to_source,
)
from scenevoice.detection.geometry import iou as box_iou
from scenevoice.errors import InvalidInputError, InvalidParameterError


def int_box(rng: random.Random, span: int = 48) -> tuple[int, int, int, int]:
    x1 = rng.randrange(0, span)
    y1 = rng.randrange(0, span)
    return (x1, y1, x1 + rng.randrange(1, span), y1 + rng.randrange(1, span))


class TestBox:
    def test_area_and_center(self):
        b = Box(10, 20, 30, 60)
        assert b.area == 800
        assert (b.center_x, b.center_y) == (20, 40)

    def test_inverted_box_rejected(self):
        with pytest.raises(InvalidInputError):
            Box(5, 0, 4, 10)
        with pytest.raises(InvalidInputError):
            Box(0, 5, 10, 4)

    def test_zero_area_box_allowed(self):
        assert Box(3, 3, 3, 3).area == 0


class TestIou:
    def test_quarter_overlap_example(self):
        value = box_iou(Box(0, 0, 10, 10), Box(5, 5, 15, 15))
        assert value == pytest.approx(25 / 175, abs=1e-12)

    def test_identical_boxes(self):
        b = Box(2, 3, 9, 11)
        assert box_iou(b, b) == 1.0

    def test_disjoint_boxes(self):
        assert box_iou(Box(0, 0, 1, 1), Box(5, 5, 6, 6)) == 0.0

    def test_edge_touching_boxes(self):
        assert box_iou(Box(0, 0, 5, 5), Box(5, 0, 10, 5)) == 0.0

    def test_contained_box(self):
        assert box_iou(Box(0, 0, 10, 10), Box(2, 2, 7, 7)) == pytest.approx(0.25)

    def test_zero_area_pair(self):
        assert box_iou(Box(1, 1, 1, 1), Box(1, 1, 1, 1)) == 0.0

    def test_matches_grid_cell_counting(self):
        rng = random.Random(42)
        for _ in range(200):
            a, b = int_box(rng), int_box(rng)
            expected = oracles.grid_iou(a, b)
            assert box_iou(Box(*a), Box(*b)) == pytest.approx(float(expected), abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_symmetry_and_range(self, data):
        def draw_box():
            x1 = data.draw(st.floats(0, 100))
            y1 = data.draw(st.floats(0, 100))
            return Box(
                x1,
                y1,
                x1 + data.draw(st.floats(0, 100)),
                y1 + data.draw(st.floats(0, 100)),
            )

        a, b = draw_box(), draw_box()
        v = box_iou(a, b)
        assert 0.0 <= v <= 1.0
        assert v == box_iou(b, a)


class TestLetterbox:
    def test_landscape_example(self):
        t = letterbox_transform(640, 480, 640)
        assert (t.scale, t.pad_x, t.pad_y) == (1.0, 0, 80)

    def test_upscale_example(self):
        t = letterbox_transform(320, 240, 640)
        assert (t.scale, t.pad_x, t.pad_y) == (2.0, 0, 80)

    def test_portrait_pads_horizontally(self):
        t = letterbox_transform(480, 640, 640)
        assert (t.scale, t.pad_x, t.pad_y) == (1.0, 80, 0)

    def test_non_integer_scale_rounds_half_up(self):
        t = letterbox_transform(300, 200, 640)
        assert t.scale == pytest.approx(640 / 300)
        # scaled height int(200 * 640/300 + 0.5) = 427 -> leading pad floor 106
        assert (t.pad_x, t.pad_y) == (0, 106)

    def test_square_source_no_padding(self):
        t = letterbox_transform(640, 640, 640)
        assert (t.pad_x, t.pad_y) == (0, 0)

    @pytest.mark.parametrize("w,h,m", [(0, 10, 640), (10, 0, 640), (10, 10, 0)])
    def test_degenerate_dimensions_rejected(self, w, h, m):
        with pytest.raises(InvalidParameterError):
            letterbox_transform(w, h, m)

    def test_map_to_source_example(self):
        t = letterbox_transform(320, 240, 640)
        src = map_to_source(Box(270, 270, 370, 370), t)
        assert (src.x1, src.y1, src.x2, src.y2) == (135, 95, 185, 145)

    def test_map_clamps_to_source_bounds(self):
        t = letterbox_transform(320, 240, 640)
        src = map_to_source(Box(0, 0, 640, 640), t)
        assert (src.x1, src.y1, src.x2, src.y2) == (0, 0, 320, 240)

    def test_round_trip_identity_within_tolerance(self):
        rng = random.Random(77)
        for _ in range(100):
            src_w = rng.randrange(32, 1200)
            src_h = rng.randrange(32, 1200)
            t = letterbox_transform(src_w, src_h, 640)
            x1 = rng.uniform(0, src_w - 1)
            y1 = rng.uniform(0, src_h - 1)
            box = Box(x1, y1, rng.uniform(x1, src_w), rng.uniform(y1, src_h))
            back = map_to_source(map_from_source(box, t), t)
            for got, want in zip(
                (back.x1, back.y1, back.x2, back.y2), (box.x1, box.y1, box.x2, box.y2)
            ):
                assert got == pytest.approx(want, abs=1e-9)

    def test_scaled_content_fits_model_square(self):
        rng = random.Random(9)
        for _ in range(50):
            src_w = rng.randrange(1, 2000)
            src_h = rng.randrange(1, 2000)
            t = letterbox_transform(src_w, src_h, 640)
            scaled_w = int(src_w * t.scale + 0.5)
            scaled_h = int(src_h * t.scale + 0.5)
            assert scaled_w <= 640 and scaled_h <= 640
            assert max(scaled_w, scaled_h) == 640  # long side fills the square
