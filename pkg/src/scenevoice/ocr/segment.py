"""Group connected components into text lines."""

from __future__ import annotations

from dataclasses import dataclass

from scenevoice.imaging import connected_components
from scenevoice.raster import Component, Raster

# Components smaller than this many pixels are treated as specks and dropped.
MIN_GLYPH_PIXELS = 3

# Two components share a line when their vertical overlap covers at least
# this fraction of the shorter component's height.
LINE_OVERLAP_RATIO = 0.5


@dataclass(frozen=True)
class TextLine:
    """Glyph components of one text line, ordered left to right."""

    glyphs: tuple[Component, ...]
    x1: int
    y1: int
    x2: int
    y2: int


def _overlap_ratio(a: Component, b: Component) -> float:
    overlap = min(a.y2, b.y2) - max(a.y1, b.y1) + 1
    if overlap <= 0:
        return 0.0
    return overlap / min(a.height, b.height)


def segment_lines(binary: Raster) -> list[TextLine]:
    """Cluster foreground components into lines by vertical overlap.

    Clustering is single-linkage: a component joins a line when it overlaps
    any member by at least LINE_OVERLAP_RATIO of the shorter of the two;
    lines that a component bridges are merged. Lines come back ordered top
    to bottom (then left to right), glyphs within a line left to right.
    """
    comps = [c for c in connected_components(binary) if c.pixel_count >= MIN_GLYPH_PIXELS]
    clusters: list[list[Component]] = []
    for comp in comps:
        joined: list[int] = []
        for i, members in enumerate(clusters):
            if any(_overlap_ratio(comp, m) >= LINE_OVERLAP_RATIO for m in members):
                joined.append(i)
        if not joined:
            clusters.append([comp])
        else:
            target = clusters[joined[0]]
            target.append(comp)
            for i in reversed(joined[1:]):
                target.extend(clusters.pop(i))

    lines = []
    for members in clusters:
        glyphs = tuple(sorted(members, key=lambda c: (c.x1, c.y1, c.label)))
        lines.append(
            TextLine(
                glyphs=glyphs,
                x1=min(c.x1 for c in members),
                y1=min(c.y1 for c in members),
                x2=max(c.x2 for c in members),
                y2=max(c.y2 for c in members),
            )
        )
    lines.sort(key=lambda ln: (ln.y1, ln.x1))
    return lines
