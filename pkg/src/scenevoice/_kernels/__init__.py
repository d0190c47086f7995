"""Kernel backend selection.

The compiled extension (``scenevoice._kernels._core``) is preferred when it
imports; otherwise the pure-Python module is used. Set SCENEVOICE_KERNELS to
``pure`` or ``compiled`` to force a backend (``compiled`` raises if the
extension is missing). ``set_backend`` exists for tests and benchmarks.
"""

from __future__ import annotations

import os
from types import ModuleType

from scenevoice._kernels import pure as _pure

_active: ModuleType


def _load_compiled() -> ModuleType:
    from scenevoice._kernels import _core  # type: ignore[attr-defined]

    return _core


def available_backends() -> list[str]:
    names = ["pure"]
    try:
        _load_compiled()
        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def set_backend(name: str) -> None:
    global _active
    if name == "pure":
        _active = _pure
    elif name == "compiled":
        _active = _load_compiled()
    else:
        raise ValueError(f"unknown kernel backend {name!r}")


def get_backend(name: str | None = None) -> ModuleType:
    """The active kernel module, or a specific one when ``name`` is given."""
    if name is None:
        return _active
    if name == "pure":
        return _pure
    if name == "compiled":
        return _load_compiled()
    raise ValueError(f"unknown kernel backend {name!r}")


def backend_name() -> str:
    return _active.BACKEND_NAME


_requested = os.environ.get("SCENEVOICE_KERNELS", "auto").strip().lower()
if _requested in ("", "auto"):
    try:
        _active = _load_compiled()
    except ImportError:
        _active = _pure
elif _requested in ("pure", "compiled"):
    set_backend(_requested)
else:
    raise ValueError(
        f"SCENEVOICE_KERNELS must be 'auto', 'pure', or 'compiled', got {_requested!r}"
    )
