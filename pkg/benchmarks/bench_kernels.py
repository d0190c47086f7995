"""Benchmark the pure-Python kernels against the compiled extension.

Runs every image kernel on deterministic synthetic frames and reports the
best-of-N wall time per backend plus the speedup. The compiled column is
skipped when the extension is not importable.

Usage:
    python3 benchmarks/bench_kernels.py [--width 640] [--height 480]
                                        [--repeats 5] [--window 31]
"""

from __future__ import annotations

import argparse
import random
import time

from scenevoice._kernels import available_backends, get_backend


def synthetic_inputs(width: int, height: int, seed: int = 97) -> dict[str, bytes]:
    rng = random.Random(seed)
    n = width * height
    gray = bytes(
        min(255, max(0, int(128 + 90 * ((x * 7 + y * 3) % 64 - 32) / 32 + rng.gauss(0, 8))))
        for y in range(height)
        for x in range(width)
    )
    rgb = bytes(rng.randrange(256) for _ in range(3 * n))
    # Blobby binary field: coarse cells flipped on with 35% probability.
    cells = [[rng.random() < 0.35 for _ in range(width // 8 + 1)] for _ in range(height // 8 + 1)]
    binary = bytes(
        255 if cells[y // 8][x // 8] else 0 for y in range(height) for x in range(width)
    )
    return {"gray": gray, "rgb": rgb, "binary": binary}


def build_calls(inputs: dict[str, bytes], width: int, height: int, window: int):
    gray, rgb, binary = inputs["gray"], inputs["rgb"], inputs["binary"]
    n = width * height
    return [
        ("gray_from_rgb", lambda k: k.gray_from_rgb(rgb, n)),
        ("blur3", lambda k: k.blur3(gray, width, height)),
        ("median3", lambda k: k.median3(gray, width, height)),
        ("histogram256", lambda k: k.histogram256(gray)),
        ("box_threshold", lambda k: k.box_threshold(gray, width, height, window, 10.0)),
        ("component_stats", lambda k: k.component_stats(binary, width, height)),
    ]


def best_of(repeats: int, fn, backend) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn(backend)
        best = min(best, time.perf_counter() - started)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--width", type=int, default=640)
    parser.add_argument("--height", type=int, default=480)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--window", type=int, default=31)
    args = parser.parse_args()

    backends = available_backends()
    inputs = synthetic_inputs(args.width, args.height)
    calls = build_calls(inputs, args.width, args.height, args.window)

    print(f"frame {args.width}x{args.height}, best of {args.repeats}")
    print(f"backends: {', '.join(backends)}")
    header = f"{'kernel':<16} {'pure ms':>10} {'compiled ms':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    pure = get_backend("pure")
    compiled = get_backend("compiled") if "compiled" in backends else None
    for name, fn in calls:
        pure_s = best_of(args.repeats, fn, pure)
        if compiled is not None:
            comp_s = best_of(args.repeats, fn, compiled)
            ratio = pure_s / comp_s if comp_s > 0 else float("inf")
            print(f"{name:<16} {pure_s * 1e3:>10.2f} {comp_s * 1e3:>12.3f} {ratio:>7.1f}x")
        else:
            print(f"{name:<16} {pure_s * 1e3:>10.2f} {'-':>12} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
