"""Speech-engine stub that logs utterances and detects overlapping calls.

Usage: speak_stub.py OUT_FILE LOCK_FILE SLEEP_S TEXT

Appends TEXT to OUT_FILE. If LOCK_FILE already exists when the stub starts,
a second instance is running concurrently and an OVERLAP marker is logged
instead; serialized engines must never produce one.
"""

from __future__ import annotations

import os
import sys
import time


def main() -> int:
    out_file, lock_file, sleep_s, text = (
        sys.argv[1],
        sys.argv[2],
        float(sys.argv[3]),
        sys.argv[4],
    )
    overlapped = os.path.exists(lock_file)
    if not overlapped:
        with open(lock_file, "w", encoding="utf-8") as fh:
            fh.write(str(os.getpid()))
    try:
        if sleep_s > 0:
            time.sleep(sleep_s)
        with open(out_file, "a", encoding="utf-8") as fh:
            fh.write(("OVERLAP\t" if overlapped else "") + text + "\n")
            fh.flush()
    finally:
        if not overlapped:
            os.remove(lock_file)
    return 0


if __name__ == "__main__":
    sys.exit(main())
