"""Kernel backend selection.

Tries the compiled extension first and falls back to the NumPy kernels if it
is not built.  Set WHICHWAY_BACKEND=numpy (or =pure) to force the fallback,
WHICHWAY_BACKEND=cython to require the extension.
"""
import os

from . import _kernels_np

_requested = os.environ.get("WHICHWAY_BACKEND", "auto").strip().lower()

if _requested in ("auto", "cython"):
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "WHICHWAY_BACKEND=cython but the compiled extension is not built; "
                "reinstall with Cython available or drop the override"
            )
        _impl = _kernels_np
        BACKEND = "numpy"
elif _requested in ("numpy", "pure", "python"):
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    raise ImportError(f"unknown WHICHWAY_BACKEND value: {_requested!r}")

packet_grid = _impl.packet_grid
direct_grid = _impl.direct_grid
closed_grid = _impl.closed_grid
closed_parts_grid = _impl.closed_parts_grid
conditional_grid = _impl.conditional_grid


def backend_name() -> str:
    """Name of the active kernel backend ("cython" or "numpy")."""
    return BACKEND
