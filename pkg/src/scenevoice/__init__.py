"""Scene-to-speech toolkit.

Turns camera frames into short spoken announcements: an object-detection
path (hazard-aware, debounced) and a printed-text reading path built on a
fixed 5x7 bitmap font. Everything is deterministic and stdlib-only; a
compiled kernel module accelerates the per-pixel image work when present.
"""

from scenevoice.errors import (
    BackendUnavailableError,
    ConfigurationError,
    DegenerateHistogramError,
    EngineUnavailableError,
    InvalidInputError,
    InvalidParameterError,
    SceneVoiceError,
    SinkClosedError,
)
from scenevoice.raster import Component, Raster, read_pnm, write_pnm

__version__ = "0.1.0"

__all__ = [
    "BackendUnavailableError",
    "Component",
    "ConfigurationError",
    "DegenerateHistogramError",
    "EngineUnavailableError",
    "InvalidInputError",
    "InvalidParameterError",
    "Raster",
    "SceneVoiceError",
    "SinkClosedError",
    "read_pnm",
    "write_pnm",
    "__version__",
]
