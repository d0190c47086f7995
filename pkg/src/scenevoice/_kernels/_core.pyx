# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled image kernels.

Bit-identical mirror of ``pure.py``: every function must return exactly the
bytes the pure implementation returns. Integer arithmetic matches by
construction; the single float comparison in ``box_threshold`` uses the
same expression evaluated in IEEE doubles on both sides.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

BACKEND_NAME = "compiled"


def gray_from_rgb(const unsigned char[::1] src, Py_ssize_t n):
    cdef bytearray out_ba = bytearray(n)
    cdef unsigned char[::1] out = out_ba
    cdef Py_ssize_t i
    cdef int r, g, b
    for i in range(n):
        r = src[3 * i]
        g = src[3 * i + 1]
        b = src[3 * i + 2]
        out[i] = <unsigned char>((299 * r + 587 * g + 114 * b + 500) // 1000)
    return bytes(out_ba)


def blur3(const unsigned char[::1] src, Py_ssize_t w, Py_ssize_t h):
    """3x3 binomial blur (1 2 1 / 2 4 2 / 1 2 1)/16, replicated edges, round half up."""
    cdef Py_ssize_t x, y, base, a, b, c, ym, yp
    cdef int* tmp = <int*> malloc(w * h * sizeof(int))
    if tmp == NULL:
        raise MemoryError()
    cdef bytearray out_ba = bytearray(w * h)
    cdef unsigned char[::1] out = out_ba
    try:
        for y in range(h):
            base = y * w
            if w == 1:
                tmp[base] = 4 * src[base]
                continue
            tmp[base] = 3 * src[base] + src[base + 1]
            for x in range(1, w - 1):
                tmp[base + x] = src[base + x - 1] + 2 * src[base + x] + src[base + x + 1]
            tmp[base + w - 1] = src[base + w - 2] + 3 * src[base + w - 1]
        for y in range(h):
            ym = y - 1 if y > 0 else 0
            yp = y + 1 if y < h - 1 else h - 1
            a = ym * w
            b = y * w
            c = yp * w
            for x in range(w):
                out[b + x] = <unsigned char>((tmp[a + x] + 2 * tmp[b + x] + tmp[c + x] + 8) >> 4)
    finally:
        free(tmp)
    return bytes(out_ba)


cdef inline unsigned char _median9(unsigned char* v) nogil:
    # Partial sorting network: after these exchanges v[4] is the median.
    cdef unsigned char t
    cdef int i, j
    # A simple full insertion sort of 9 elements keeps semantics obvious.
    for i in range(1, 9):
        t = v[i]
        j = i - 1
        while j >= 0 and v[j] > t:
            v[j + 1] = v[j]
            j -= 1
        v[j + 1] = t
    return v[4]


def median3(const unsigned char[::1] src, Py_ssize_t w, Py_ssize_t h):
    """3x3 median filter with replicated edges."""
    cdef Py_ssize_t x, y, ym, yc, yp, xm, xp
    cdef unsigned char win[9]
    cdef bytearray out_ba = bytearray(w * h)
    cdef unsigned char[::1] out = out_ba
    for y in range(h):
        ym = (y - 1 if y > 0 else 0) * w
        yc = y * w
        yp = (y + 1 if y < h - 1 else h - 1) * w
        for x in range(w):
            xm = x - 1 if x > 0 else 0
            xp = x + 1 if x < w - 1 else w - 1
            win[0] = src[ym + xm]
            win[1] = src[ym + x]
            win[2] = src[ym + xp]
            win[3] = src[yc + xm]
            win[4] = src[yc + x]
            win[5] = src[yc + xp]
            win[6] = src[yp + xm]
            win[7] = src[yp + x]
            win[8] = src[yp + xp]
            out[yc + x] = _median9(win)
    return bytes(out_ba)


def histogram256(const unsigned char[::1] src):
    cdef Py_ssize_t counts[256]
    cdef Py_ssize_t i, n = src.shape[0]
    memset(counts, 0, sizeof(counts))
    for i in range(n):
        counts[src[i]] += 1
    return [counts[i] for i in range(256)]


def box_threshold(const unsigned char[::1] src, Py_ssize_t w, Py_ssize_t h,
                  Py_ssize_t window, double c):
    """Window-mean threshold: 255 where pixel > local mean - c, else 0.

    Same integral-image construction and the same (px + c) * area > sum
    comparison as the pure kernel, so outputs match bit for bit.
    """
    cdef Py_ssize_t r = window // 2
    cdef Py_ssize_t pw = w + 2 * r
    cdef Py_ssize_t ph = h + 2 * r
    cdef Py_ssize_t area = window * window
    cdef Py_ssize_t stride = pw + 1
    cdef Py_ssize_t px, py, sx, sy, x, y, row_base, top, bot
    cdef long long acc, s
    cdef long long* integral = <long long*> malloc((ph + 1) * stride * sizeof(long long))
    if integral == NULL:
        raise MemoryError()
    cdef bytearray out_ba = bytearray(w * h)
    cdef unsigned char[::1] out = out_ba
    try:
        memset(integral, 0, (ph + 1) * stride * sizeof(long long))
        for py in range(ph):
            sy = py - r
            if sy < 0:
                sy = 0
            elif sy >= h:
                sy = h - 1
            row_base = sy * w
            acc = 0
            for px in range(pw):
                sx = px - r
                if sx < 0:
                    sx = 0
                elif sx >= w:
                    sx = w - 1
                acc += src[row_base + sx]
                integral[(py + 1) * stride + px + 1] = integral[py * stride + px + 1] + acc
        for y in range(h):
            top = y * stride
            bot = (y + window) * stride
            row_base = y * w
            for x in range(w):
                s = (integral[bot + x + window] - integral[bot + x]
                     - integral[top + x + window] + integral[top + x])
                if (src[row_base + x] + c) * area > s:
                    out[row_base + x] = 255
    finally:
        free(integral)
    return bytes(out_ba)


cdef Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t i) nogil:
    cdef Py_ssize_t root = i
    cdef Py_ssize_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


def component_stats(const unsigned char[::1] src, Py_ssize_t w, Py_ssize_t h):
    """4-connected components of 255-valued pixels.

    Returns (anchor, min_x, min_y, max_x, max_y, pixel_count) tuples in
    anchor order, exactly as the pure kernel does.
    """
    # Worst case: every other pixel starts a run.
    # A row of width w holds at most ceil(w / 2) disjoint foreground runs.
    cdef Py_ssize_t max_runs = h * ((w + 1) // 2) + 1
    cdef Py_ssize_t* run_y = <Py_ssize_t*> malloc(max_runs * sizeof(Py_ssize_t))
    cdef Py_ssize_t* run_s = <Py_ssize_t*> malloc(max_runs * sizeof(Py_ssize_t))
    cdef Py_ssize_t* run_e = <Py_ssize_t*> malloc(max_runs * sizeof(Py_ssize_t))
    cdef Py_ssize_t* parent = <Py_ssize_t*> malloc(max_runs * sizeof(Py_ssize_t))
    if run_y == NULL or run_s == NULL or run_e == NULL or parent == NULL:
        free(run_y); free(run_s); free(run_e); free(parent)
        raise MemoryError()
    cdef Py_ssize_t n_runs = 0
    cdef Py_ssize_t prev_lo = 0, prev_hi = 0, row_lo
    cdef Py_ssize_t x, y, base, start, end, rid, prid, ra, rb
    try:
        for y in range(h):
            base = y * w
            row_lo = n_runs
            x = 0
            while x < w:
                if src[base + x] != 255:
                    x += 1
                    continue
                start = x
                while x < w and src[base + x] == 255:
                    x += 1
                end = x - 1
                rid = n_runs
                run_y[rid] = y
                run_s[rid] = start
                run_e[rid] = end
                parent[rid] = rid
                n_runs += 1
                for prid in range(prev_lo, prev_hi):
                    # 4-connectivity: column ranges must overlap.
                    if run_s[prid] <= end and start <= run_e[prid]:
                        ra = _find(parent, prid)
                        rb = _find(parent, rid)
                        if ra != rb:
                            # Keep the smaller root so earlier runs stay roots.
                            if ra < rb:
                                parent[rb] = ra
                            else:
                                parent[ra] = rb
            prev_lo = row_lo
            prev_hi = n_runs

        stats = {}
        for rid in range(n_runs):
            ra = _find(parent, rid)
            entry = stats.get(ra)
            if entry is None:
                stats[ra] = [
                    run_y[ra] * w + run_s[ra],  # anchor: root run's first pixel
                    run_s[rid],
                    run_y[rid],
                    run_e[rid],
                    run_y[rid],
                    run_e[rid] - run_s[rid] + 1,
                ]
            else:
                if run_s[rid] < entry[1]:
                    entry[1] = run_s[rid]
                if run_e[rid] > entry[3]:
                    entry[3] = run_e[rid]
                entry[4] = run_y[rid]  # runs scan top to bottom
                entry[5] += run_e[rid] - run_s[rid] + 1
    finally:
        free(run_y)
        free(run_s)
        free(run_e)
        free(parent)
    ordered = sorted(stats.values(), key=lambda e: e[0])
    return [tuple(e) for e in ordered]
