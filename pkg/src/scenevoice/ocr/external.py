"""Bridge to an external text-recognition command."""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile

from scenevoice.errors import ConfigurationError, EngineUnavailableError
from scenevoice.ocr.recognize import TextBlock
from scenevoice.raster import Raster, write_pnm

DEFAULT_TIMEOUT_S = 10.0


def external_ocr(
    image: Raster,
    command_template: str,
    timeout_s: float = DEFAULT_TIMEOUT_S,
) -> list[TextBlock]:
    """Recognize text by shelling out to another program.

    The template must contain an ``{image}`` placeholder; it is split into
    argv tokens and run directly, never through a shell. The image is
    handed over as a temporary PNM file. Each non-empty stdout line becomes
    one TextBlock spanning the full frame with confidence 1.0 (external
    engines report no geometry or scores).

    Raises ConfigurationError for a template without the placeholder and
    EngineUnavailableError when the program cannot be spawned, times out,
    or exits nonzero.
    """
    if "{image}" not in command_template:
        raise ConfigurationError("command template must contain {image}")
    suffix = ".ppm" if image.channels == 3 else ".pgm"
    fd, path = tempfile.mkstemp(suffix=suffix)
    try:
        os.close(fd)
        write_pnm(path, image)
        argv = [tok.replace("{image}", path) for tok in shlex.split(command_template)]
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                text=True,
                timeout=timeout_s,
            )
        except OSError as exc:
            raise EngineUnavailableError(f"cannot run {argv[0]!r}: {exc}") from exc
        except subprocess.TimeoutExpired as exc:
            raise EngineUnavailableError(f"{argv[0]!r} timed out after {timeout_s}s") from exc
        if proc.returncode != 0:
            raise EngineUnavailableError(
                f"{argv[0]!r} exited with status {proc.returncode}: {proc.stderr.strip()}"
            )
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass
    blocks = []
    for line in proc.stdout.splitlines():
        line = line.strip()
        if not line:
            continue
        blocks.append(
            TextBlock(
                text=line,
                x1=0,
                y1=0,
                x2=image.width - 1,
                y2=image.height - 1,
                confidence=1.0,
            )
        )
    return blocks
