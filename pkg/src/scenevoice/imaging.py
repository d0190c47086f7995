"""Grayscale, filtering, thresholding, and connected components.

All operations are pure functions on Raster values with fully pinned
integer semantics: rounding is half-up, filter edges replicate, and the
Otsu tie-break picks the smallest maximizing threshold. Results are
bit-identical across kernel backends.
"""

from __future__ import annotations

from scenevoice import _kernels
from scenevoice.errors import (
    DegenerateHistogramError,
    InvalidInputError,
    InvalidParameterError,
)
from scenevoice.raster import Component, Raster

_INVERT_TABLE = bytes(255 - v for v in range(256))


def _require_gray(raster: Raster, op: str) -> None:
    if raster.channels != 1:
        raise InvalidInputError(f"{op} requires a single-channel raster")


def to_grayscale(raster: Raster) -> Raster:
    """Weighted RGB-to-gray conversion (0.299, 0.587, 0.114), round half up."""
    if raster.channels != 3:
        raise InvalidInputError("to_grayscale requires a 3-channel raster")
    n = raster.width * raster.height
    samples = _kernels.get_backend().gray_from_rgb(raster.samples, n)
    return Raster(raster.width, raster.height, 1, samples)


def gaussian_blur3(raster: Raster) -> Raster:
    """3x3 binomial blur, kernel (1 2 1; 2 4 2; 1 2 1)/16, replicated edges."""
    _require_gray(raster, "gaussian_blur3")
    samples = _kernels.get_backend().blur3(raster.samples, raster.width, raster.height)
    return Raster(raster.width, raster.height, 1, samples)


def median3(raster: Raster) -> Raster:
    """3x3 median filter with replicated edges."""
    _require_gray(raster, "median3")
    samples = _kernels.get_backend().median3(raster.samples, raster.width, raster.height)
    return Raster(raster.width, raster.height, 1, samples)


def histogram(raster: Raster) -> list[int]:
    """256-bin sample histogram of a grayscale raster."""
    _require_gray(raster, "histogram")
    return _kernels.get_backend().histogram256(raster.samples)


def otsu_threshold(raster: Raster) -> int:
    """Threshold maximizing between-class variance; smallest maximizer wins.

    The returned t splits samples into {<= t} and {> t}, t in [0, 254].
    Raises DegenerateHistogramError when the image is constant (no split
    yields two non-empty classes); callers that need a value anyway fall
    back to 127.
    """
    _require_gray(raster, "otsu_threshold")
    hist = _kernels.get_backend().histogram256(raster.samples)
    total = raster.width * raster.height
    sum_all = sum(v * hist[v] for v in range(256))

    # Between-class variance at t is (s0*c1 - s1*c0)^2 / (c0*c1*total^2).
    # Compare candidates exactly with cross-multiplied integers.
    best_t = -1
    best_num = 0
    best_den = 1
    c0 = 0
    s0 = 0
    for t in range(255):
        c0 += hist[t]
        s0 += t * hist[t]
        c1 = total - c0
        if c0 == 0 or c1 == 0:
            continue
        num = (s0 * c1 - (sum_all - s0) * c0) ** 2
        den = c0 * c1
        if best_t < 0 or num * best_den > best_num * den:
            best_t = t
            best_num = num
            best_den = den
    if best_t < 0:
        raise DegenerateHistogramError("constant image has no threshold split")
    return best_t


def binarize(raster: Raster, threshold: int) -> Raster:
    """Map samples > threshold to 255, the rest to 0, then normalize polarity.

    If foreground (255) would cover more than half the image it is inverted,
    so the minority class — ink — always ends up as 255.
    """
    _require_gray(raster, "binarize")
    if not 0 <= threshold <= 255:
        raise InvalidParameterError(f"threshold must be in [0, 255], got {threshold}")
    table = bytes(255 if v > threshold else 0 for v in range(256))
    samples = raster.samples.translate(table)
    return _normalize_polarity(raster, samples)


def adaptive_threshold(raster: Raster, window: int, c: float = 0.0) -> Raster:
    """Local mean threshold: 255 where pixel > window mean - c, else 0.

    window must be odd and >= 3; edges replicate. The same polarity rule as
    binarize applies afterward.
    """
    _require_gray(raster, "adaptive_threshold")
    if window < 3 or window % 2 == 0:
        raise InvalidParameterError(f"window must be odd and >= 3, got {window}")
    samples = _kernels.get_backend().box_threshold(
        raster.samples, raster.width, raster.height, window, c
    )
    return _normalize_polarity(raster, samples)


def _normalize_polarity(raster: Raster, samples: bytes) -> Raster:
    fg = samples.count(255)
    if 2 * fg > raster.width * raster.height:
        samples = samples.translate(_INVERT_TABLE)
    return Raster(raster.width, raster.height, 1, samples)


def connected_components(raster: Raster) -> list[Component]:
    """4-connected components of 255-valued pixels in a binary raster.

    Components are ordered by (top, left) of their bounding boxes, ties
    broken by first-pixel scan order; labels are dense from 1 in that order.
    An image with no foreground yields an empty list.
    """
    _require_gray(raster, "connected_components")
    stats = _kernels.get_backend().component_stats(
        raster.samples, raster.width, raster.height
    )
    # stats rows: (anchor, min_x, min_y, max_x, max_y, pixel_count)
    ordered = sorted(stats, key=lambda s: (s[2], s[1], s[0]))
    return [
        Component(label=i + 1, x1=s[1], y1=s[2], x2=s[3], y2=s[4], pixel_count=s[5])
        for i, s in enumerate(ordered)
    ]
