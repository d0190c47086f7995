"""Pure-Python image kernels.

Fallback implementations of the per-pixel hot loops. Semantics here are the
reference: the compiled module in ``_core.pyx`` must produce byte-identical
results for every function (integer arithmetic throughout; the one float
comparison in ``box_threshold`` is written identically in both).
"""

from __future__ import annotations

from collections import Counter

BACKEND_NAME = "pure"

# Grayscale weights: 0.299 R + 0.587 G + 0.114 B, round half up.
# Implemented in integer arithmetic: (299 R + 587 G + 114 B + 500) // 1000.


def gray_from_rgb(src: bytes, n: int) -> bytes:
    out = bytearray(n)
    rs = src[0::3]
    gs = src[1::3]
    bs = src[2::3]
    for i in range(n):
        out[i] = (299 * rs[i] + 587 * gs[i] + 114 * bs[i] + 500) // 1000
    return bytes(out)


def blur3(src: bytes, w: int, h: int) -> bytes:
    """3x3 binomial blur (1 2 1 / 2 4 2 / 1 2 1)/16, replicated edges, round half up."""
    # Horizontal pass: t[y*w+x] = s[xm] + 2 s[x] + s[xp], edges replicated.
    tmp = [0] * (w * h)
    for y in range(h):
        base = y * w
        row = src[base : base + w]
        trow = tmp
        if w == 1:
            trow[base] = 4 * row[0]
            continue
        trow[base] = 3 * row[0] + row[1]
        for x in range(1, w - 1):
            trow[base + x] = row[x - 1] + 2 * row[x] + row[x + 1]
        trow[base + w - 1] = row[w - 2] + 3 * row[w - 1]
    out = bytearray(w * h)
    for y in range(h):
        ym = y - 1 if y > 0 else 0
        yp = y + 1 if y < h - 1 else h - 1
        a = ym * w
        b = y * w
        c = yp * w
        for x in range(w):
            out[b + x] = (tmp[a + x] + 2 * tmp[b + x] + tmp[c + x] + 8) >> 4
    return bytes(out)


def median3(src: bytes, w: int, h: int) -> bytes:
    """3x3 median filter with replicated edges."""
    out = bytearray(w * h)
    for y in range(h):
        ym = (y - 1 if y > 0 else 0) * w
        yc = y * w
        yp = (y + 1 if y < h - 1 else h - 1) * w
        for x in range(w):
            xm = x - 1 if x > 0 else 0
            xp = x + 1 if x < w - 1 else w - 1
            win = sorted(
                (
                    src[ym + xm], src[ym + x], src[ym + xp],
                    src[yc + xm], src[yc + x], src[yc + xp],
                    src[yp + xm], src[yp + x], src[yp + xp],
                )
            )
            out[yc + x] = win[4]
    return bytes(out)


def histogram256(src: bytes) -> list[int]:
    hist = [0] * 256
    for value, count in Counter(src).items():
        hist[value] = count
    return hist


def box_threshold(src: bytes, w: int, h: int, window: int, c: float) -> bytes:
    """Window-mean threshold: 255 where pixel > local mean - c, else 0.

    The window is ``window x window`` with replicated edges. The comparison
    is evaluated as (px + c) * area > sum to avoid a division; the compiled
    kernel uses the same expression so results match bit for bit.
    """
    r = window // 2
    pw = w + 2 * r
    ph = h + 2 * r
    area = window * window

    # Integral image over the replication-padded source, (ph+1) x (pw+1).
    stride = pw + 1
    integral = [0] * ((ph + 1) * stride)
    for py in range(ph):
        sy = py - r
        if sy < 0:
            sy = 0
        elif sy >= h:
            sy = h - 1
        row_base = sy * w
        acc = 0
        prev = py * stride
        cur = (py + 1) * stride
        for px in range(pw):
            sx = px - r
            if sx < 0:
                sx = 0
            elif sx >= w:
                sx = w - 1
            acc += src[row_base + sx]
            integral[cur + px + 1] = integral[prev + px + 1] + acc

    out = bytearray(w * h)
    for y in range(h):
        top = y * stride
        bot = (y + window) * stride
        row_base = y * w
        for x in range(w):
            s = (
                integral[bot + x + window]
                - integral[bot + x]
                - integral[top + x + window]
                + integral[top + x]
            )
            if (src[row_base + x] + c) * area > s:
                out[row_base + x] = 255
    return bytes(out)


def component_stats(src: bytes, w: int, h: int) -> list[tuple[int, int, int, int, int, int]]:
    """4-connected components of 255-valued pixels.

    Returns one tuple per component in first-pixel scan order:
    (anchor, min_x, min_y, max_x, max_y, pixel_count) where anchor is the
    row-major index of the first pixel encountered in a top-to-bottom,
    left-to-right scan.
    """
    # Union-find over row runs of foreground pixels.
    parent: list[int] = []

    def find(i: int) -> int:
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    # Each run: (y, x_start, x_end_inclusive, set_id)
    runs: list[tuple[int, int, int, int]] = []
    prev_row_runs: list[tuple[int, int, int]] = []  # (x_start, x_end, run_index)
    for y in range(h):
        base = y * w
        row_runs: list[tuple[int, int, int]] = []
        x = 0
        while x < w:
            if src[base + x] != 255:
                x += 1
                continue
            start = x
            while x < w and src[base + x] == 255:
                x += 1
            end = x - 1
            rid = len(runs)
            parent.append(rid)
            runs.append((y, start, end, rid))
            # Merge with 4-connected runs of the previous row (column overlap).
            for px_start, px_end, prid in prev_row_runs:
                if px_start <= end and start <= px_end:
                    ra, rb = find(prid), find(rid)
                    if ra != rb:
                        # Keep the smaller root so earlier runs stay roots.
                        if ra < rb:
                            parent[rb] = ra
                        else:
                            parent[ra] = rb
            row_runs.append((start, end, rid))
        prev_row_runs = row_runs

    # Accumulate per-root stats; roots are the earliest run of the component.
    stats: dict[int, list[int]] = {}
    for idx, (y, start, end, _) in enumerate(runs):
        root = find(idx)
        count = end - start + 1
        anchor = runs[root][0] * w + runs[root][1]
        entry = stats.get(root)
        if entry is None:
            stats[root] = [anchor, start, y, end, y, count]
        else:
            if start < entry[1]:
                entry[1] = start
            if end > entry[3]:
                entry[3] = end
            entry[4] = y  # runs scan top to bottom
            entry[5] += count
    ordered = sorted(stats.values(), key=lambda e: e[0])
    return [tuple(e) for e in ordered]
