"""External-OCR stub: prints canned text for an image path argument.

Usage: ocr_stub.py MODE IMAGE_PATH
  ok    verify the image exists and print two lines of text
  fail  exit with status 3
  slow  sleep well past any reasonable timeout, then print
"""

from __future__ import annotations

import os
import sys
import time


def main() -> int:
    mode, image = sys.argv[1], sys.argv[2]
    if mode == "fail":
        return 3
    if mode == "slow":
        time.sleep(30)
    if not os.path.exists(image):
        return 1
    print("HELLO WORLD")
    print("SECOND LINE")
    return 0


if __name__ == "__main__":
    sys.exit(main())
