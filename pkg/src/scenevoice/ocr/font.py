"""Fixed 5x7 bitmap glyph font: parsing, validation, builtin data.

Font file format: plain text records. Each record is the glyph's character
on a line of its own followed by seven lines of five characters, '#' for ink
and '.' for background. Blank lines between records are ignored.
"""

from __future__ import annotations

from importlib import resources

from scenevoice.errors import InvalidInputError

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7
GLYPH_CELLS = GLYPH_WIDTH * GLYPH_HEIGHT

# Bitmaps are flat tuples of 35 ints (0/1), row-major.
Bitmap = tuple[int, ...]


class GlyphFont:
    """Immutable mapping from characters to 5x7 bitmaps."""

    def __init__(self, bitmaps: dict[str, Bitmap]):
        if not bitmaps:
            raise InvalidInputError("font contains no glyphs")
        seen: dict[Bitmap, str] = {}
        for char, bitmap in bitmaps.items():
            if len(char) != 1:
                raise InvalidInputError(f"glyph key must be one character, got {char!r}")
            if len(bitmap) != GLYPH_CELLS or any(v not in (0, 1) for v in bitmap):
                raise InvalidInputError(f"glyph {char!r} bitmap is not 5x7 binary")
            if bitmap in seen:
                raise InvalidInputError(
                    f"glyphs {seen[bitmap]!r} and {char!r} share one bitmap"
                )
            seen[bitmap] = char
        # Sorted by code point so matching iterates deterministically.
        self._bitmaps = {c: bitmaps[c] for c in sorted(bitmaps)}

    def chars(self) -> str:
        return "".join(self._bitmaps)

    def __contains__(self, char: str) -> bool:
        return char in self._bitmaps

    def __len__(self) -> int:
        return len(self._bitmaps)

    def bitmap(self, char: str) -> Bitmap:
        try:
            return self._bitmaps[char]
        except KeyError:
            raise InvalidInputError(f"font has no glyph for {char!r}") from None

    def items(self) -> list[tuple[str, Bitmap]]:
        return list(self._bitmaps.items())

    def rows(self, char: str) -> list[str]:
        """Glyph as seven 5-character strings, for display and tooling."""
        bm = self.bitmap(char)
        out = []
        for y in range(GLYPH_HEIGHT):
            row = bm[y * GLYPH_WIDTH : (y + 1) * GLYPH_WIDTH]
            out.append("".join("#" if v else "." for v in row))
        return out


def parse_font(text: str) -> GlyphFont:
    lines = [ln.rstrip("\n") for ln in text.splitlines()]
    bitmaps: dict[str, Bitmap] = {}
    i = 0
    n = len(lines)
    while i < n:
        if not lines[i].strip():
            i += 1
            continue
        char_line = lines[i]
        if len(char_line) != 1:
            raise InvalidInputError(
                f"font line {i + 1}: expected a single glyph character, got {char_line!r}"
            )
        char = char_line
        if char in bitmaps:
            raise InvalidInputError(f"duplicate glyph record for {char!r}")
        if i + GLYPH_HEIGHT >= n:
            raise InvalidInputError(f"truncated glyph record for {char!r}")
        cells: list[int] = []
        for j in range(GLYPH_HEIGHT):
            row = lines[i + 1 + j]
            if len(row) != GLYPH_WIDTH or any(ch not in "#." for ch in row):
                raise InvalidInputError(
                    f"font line {i + 2 + j}: glyph {char!r} row {row!r} is not five of '#'/'.'"
                )
            cells.extend(1 if ch == "#" else 0 for ch in row)
        bitmaps[char] = tuple(cells)
        i += 1 + GLYPH_HEIGHT
    return GlyphFont(bitmaps)


def load_font(path: str) -> GlyphFont:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_font(fh.read())
    except OSError as exc:
        raise InvalidInputError(f"cannot read font file {path!r}: {exc}") from exc


_builtin: GlyphFont | None = None


def builtin_font() -> GlyphFont:
    """The packaged uppercase + digits + punctuation font."""
    global _builtin
    if _builtin is None:
        data = resources.files("scenevoice.ocr").joinpath("data/font5x7.txt")
        _builtin = parse_font(data.read_text(encoding="utf-8"))
    return _builtin
