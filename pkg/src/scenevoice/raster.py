"""Raster container and binary PGM/PPM file I/O.

A Raster is a value: immutable dimensions plus an immutable row-major byte
string of 8-bit samples (1 channel for grayscale, 3 for RGB). Instances are
safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scenevoice.errors import InvalidInputError

_BINARY_VALUES = frozenset((0, 255))


@dataclass(frozen=True)
class Raster:
    """Row-major 8-bit image, 1 (gray) or 3 (RGB) channels."""

    width: int
    height: int
    channels: int
    samples: bytes = field(repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise InvalidInputError(
                f"raster dimensions must be >= 1, got {self.width}x{self.height}"
            )
        if self.channels not in (1, 3):
            raise InvalidInputError(f"channels must be 1 or 3, got {self.channels}")
        expected = self.width * self.height * self.channels
        if len(self.samples) != expected:
            raise InvalidInputError(
                f"sample buffer holds {len(self.samples)} bytes, expected {expected}"
            )

    # -- constructors ---------------------------------------------------

    @classmethod
    def gray(cls, width: int, height: int, fill: int = 0) -> "Raster":
        return cls(width, height, 1, bytes([fill]) * (width * height))

    @classmethod
    def rgb(cls, width: int, height: int, fill: tuple[int, int, int] = (0, 0, 0)) -> "Raster":
        return cls(width, height, 3, bytes(fill) * (width * height))

    # -- accessors ------------------------------------------------------

    def pixel(self, x: int, y: int) -> tuple[int, ...]:
        """Sample tuple at (x, y); length equals the channel count."""
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise InvalidInputError(f"pixel ({x}, {y}) outside {self.width}x{self.height}")
        i = (y * self.width + x) * self.channels
        return tuple(self.samples[i : i + self.channels])

    def is_binary(self) -> bool:
        """True when the raster is single-channel and every sample is 0 or 255."""
        return self.channels == 1 and set(self.samples) <= _BINARY_VALUES


@dataclass(frozen=True)
class Component:
    """A 4-connected foreground region of a binary raster.

    The bounding box is inclusive on both ends. Labels are dense, starting
    at 1, assigned in (top, left) order of the bounding boxes.
    """

    label: int
    x1: int
    y1: int
    x2: int
    y2: int
    pixel_count: int

    def __post_init__(self) -> None:
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise InvalidInputError("component bounding box is inverted")
        if self.pixel_count < 1:
            raise InvalidInputError("component must contain at least one pixel")

    @property
    def width(self) -> int:
        return self.x2 - self.x1 + 1

    @property
    def height(self) -> int:
        return self.y2 - self.y1 + 1


# -- PGM (P5) / PPM (P6) binary I/O, maxval 255 -------------------------


def _read_header_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comments that run to end of line.
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c in b" \t\r\n":
            pos += 1
        elif c == b"#":
            while pos < n and data[pos : pos + 1] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos : pos + 1] not in b" \t\r\n":
        pos += 1
    if start == pos:
        raise InvalidInputError("truncated PNM header")
    return data[start:pos], pos


def read_pnm(path: str) -> Raster:
    """Read a binary PGM (P5) or PPM (P6) file with maxval 255."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read image file {path!r}: {exc}") from exc
    return parse_pnm(data, name=path)


def parse_pnm(data: bytes, name: str = "<bytes>") -> Raster:
    magic, pos = _read_header_token(data, 0)
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise InvalidInputError(f"{name}: unsupported PNM magic {magic!r}")
    fields = []
    for _ in range(3):
        token, pos = _read_header_token(data, pos)
        if not token.isdigit():
            raise InvalidInputError(f"{name}: malformed PNM header token {token!r}")
        fields.append(int(token))
    width, height, maxval = fields
    if maxval != 255:
        raise InvalidInputError(f"{name}: only maxval 255 supported, got {maxval}")
    # Exactly one whitespace byte separates the header from the raster data.
    if pos >= len(data) or data[pos : pos + 1] not in b" \t\r\n":
        raise InvalidInputError(f"{name}: missing separator after PNM header")
    pos += 1
    expected = width * height * channels
    samples = data[pos : pos + expected]
    if len(samples) != expected:
        raise InvalidInputError(
            f"{name}: expected {expected} raster bytes, found {len(samples)}"
        )
    return Raster(width, height, channels, samples)


def write_pnm(path: str, raster: Raster) -> None:
    """Write a raster as binary PGM (1 channel) or PPM (3 channels)."""
    with open(path, "wb") as fh:
        fh.write(encode_pnm(raster))


def encode_pnm(raster: Raster) -> bytes:
    magic = b"P5" if raster.channels == 1 else b"P6"
    header = b"%s\n%d %d\n255\n" % (magic, raster.width, raster.height)
    return header + raster.samples
