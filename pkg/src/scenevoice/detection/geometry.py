"""Axis-aligned box arithmetic and letterbox coordinate mapping."""

from __future__ import annotations

from dataclasses import dataclass

from scenevoice.errors import InvalidInputError, InvalidParameterError


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle; corners may be fractional pixels."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self) -> None:
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise InvalidInputError(
                f"box corners are inverted: ({self.x1}, {self.y1}, {self.x2}, {self.y2})"
            )

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    @property
    def center_x(self) -> float:
        return (self.x1 + self.x2) / 2.0

    @property
    def center_y(self) -> float:
        return (self.y1 + self.y2) / 2.0


def iou(a: Box, b: Box) -> float:
    """Intersection area over union area; 0.0 when the union is empty."""
    iw = min(a.x2, b.x2) - max(a.x1, b.x1)
    ih = min(a.y2, b.y2) - max(a.y1, b.y1)
    inter = iw * ih if iw > 0 and ih > 0 else 0.0
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


@dataclass(frozen=True)
class LetterboxTransform:
    """Mapping between a source frame and a square model input.

    The source is scaled by the largest factor that still fits the model
    square, then centered with padding. pad_x/pad_y are the leading-edge
    (left/top) pads; when the leftover is odd the trailing edge gets the
    extra pixel.
    """

    scale: float
    pad_x: int
    pad_y: int
    model_size: int
    src_w: int
    src_h: int


def letterbox_transform(src_w: int, src_h: int, model_size: int) -> LetterboxTransform:
    """Compute the aspect-preserving fit of src_w x src_h into a model square."""
    if src_w < 1 or src_h < 1 or model_size < 1:
        raise InvalidParameterError(
            f"dimensions must be >= 1, got {src_w}x{src_h} -> {model_size}"
        )
    scale = min(model_size / src_w, model_size / src_h)
    # Scaled extent rounds half up so both backends of the pipeline agree.
    scaled_w = int(src_w * scale + 0.5)
    scaled_h = int(src_h * scale + 0.5)
    return LetterboxTransform(
        scale=scale,
        pad_x=(model_size - scaled_w) // 2,
        pad_y=(model_size - scaled_h) // 2,
        model_size=model_size,
        src_w=src_w,
        src_h=src_h,
    )


def map_to_source(box: Box, t: LetterboxTransform) -> Box:
    """Map a model-space box back onto the source frame, clamped to it."""

    def clamp(v: float, hi: int) -> float:
        return 0.0 if v < 0.0 else (float(hi) if v > hi else v)

    return Box(
        x1=clamp((box.x1 - t.pad_x) / t.scale, t.src_w),
        y1=clamp((box.y1 - t.pad_y) / t.scale, t.src_h),
        x2=clamp((box.x2 - t.pad_x) / t.scale, t.src_w),
        y2=clamp((box.y2 - t.pad_y) / t.scale, t.src_h),
    )


def map_from_source(box: Box, t: LetterboxTransform) -> Box:
    """Map a source-frame box into model space (forward letterbox mapping)."""
    return Box(
        x1=box.x1 * t.scale + t.pad_x,
        y1=box.y1 * t.scale + t.pad_y,
        x2=box.x2 * t.scale + t.pad_x,
        y2=box.y2 * t.scale + t.pad_y,
    )
