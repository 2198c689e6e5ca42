"""Hot-kernel dispatch: numba-compiled loops with a pure-numpy fallback.

The backend is chosen once at import from the ``FFTNAV_BACKEND``
environment variable (``numba`` or ``numpy``).  Unset, it defaults to
numba when importable and falls back to numpy otherwise.  Both backends
produce bit-identical results; :func:`set_backend` exists for tests and
benchmarks that need to compare them in one process.
"""

from __future__ import annotations

import os

from . import numpy_backend

try:
    from . import numba_backend

    HAS_NUMBA = True
except ImportError:
    numba_backend = None
    HAS_NUMBA = False

_BACKENDS = {"numpy": numpy_backend}
if HAS_NUMBA:
    _BACKENDS["numba"] = numba_backend


def _initial_backend():
    requested = os.environ.get("FFTNAV_BACKEND", "").strip().lower()
    if requested:
        if requested not in ("numba", "numpy"):
            raise ValueError(f"FFTNAV_BACKEND must be 'numba' or 'numpy', got {requested!r}")
        if requested == "numba" and not HAS_NUMBA:
            raise ImportError("FFTNAV_BACKEND=numba but numba is not importable")
        return requested
    return "numba" if HAS_NUMBA else "numpy"


_active = _BACKENDS[_initial_backend()]


def backend_name() -> str:
    """Name of the active backend, ``"numba"`` or ``"numpy"``."""
    return "numba" if _active is numba_backend else "numpy"


def available_backends():
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> str:
    """Switch the active backend; returns the previous name."""
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}, have {available_backends()}")
    global _active
    previous = backend_name()
    _active = _BACKENDS[name]
    return previous


def get_backend(name: str):
    """Direct handle on one backend module (for comparison benchmarks)."""
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}, have {available_backends()}")
    return _BACKENDS[name]


def raycast(px, py, ux, uy, cx, cy, cr, xmin, ymin, xmax, ymax, rmax):
    return _active.raycast(px, py, ux, uy, cx, cy, cr, xmin, ymin, xmax, ymax, rmax)


def seg_clearance(px, py, qx, qy, ox, oy, orad):
    return _active.seg_clearance(px, py, qx, qy, ox, oy, orad)


def find_extrema(y):
    return _active.find_extrema(y)


def astar(blocked, sx, sy, gx, gy):
    return _active.astar(blocked, sx, sy, gx, gy)
