"""Selects the compiled series engine when available, NumPy otherwise.

Override with the environment variable ``FDU_BACKEND``:

* ``auto`` (default): compiled extension if importable, else NumPy.
* ``compiled``: require the extension, raise if missing.
* ``python``: force the NumPy engine (used by the benchmark).
"""
from __future__ import annotations

import os

from . import _series_numpy

_choice = os.environ.get("FDU_BACKEND", "auto").lower()

if _choice == "python":
    _engine = _series_numpy
elif _choice == "compiled":
    from . import _series_cy as _engine  # type: ignore[no-redef]
else:
    if _choice != "auto":
        raise RuntimeError(f"FDU_BACKEND must be auto|compiled|python, got {_choice!r}")
    try:
        from . import _series_cy as _engine  # type: ignore[no-redef]
    except ImportError:
        _engine = _series_numpy

BACKEND_NAME = "compiled" if _engine.__name__.endswith("_series_cy") else "python"

kernel = _engine.kernel
image_sum = _engine.image_sum


def get_engine(name: str):
    """Return a specific engine module ("python" or "compiled") for benchmarks."""
    if name == "python":
        return _series_numpy
    if name == "compiled":
        from . import _series_cy

        return _series_cy
    raise ValueError(f"unknown engine {name!r}")
