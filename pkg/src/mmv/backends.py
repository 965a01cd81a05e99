"""Selection of the hot-loop backend.

The mean-variance index evaluation and its finite-difference gradient exist
in two interchangeable implementations: numba-jitted loops and vectorized
numpy. The numba path is preferred when importable; setting the environment
variable ``MMV_DISABLE_NUMBA`` to a truthy value (anything but empty, "0",
"false", "no") before import forces the numpy path. ``python -m mmv.bench``
compares the two.
"""

from __future__ import annotations

import os

from . import _kernels_numpy as numpy_kernels


def _numba_disabled() -> bool:
    value = os.environ.get("MMV_DISABLE_NUMBA", "").strip().lower()
    return value not in ("", "0", "false", "no")


numba_kernels = None
if not _numba_disabled():
    try:
        from . import _kernels_numba as numba_kernels  # type: ignore[no-redef]
    except ImportError:
        numba_kernels = None

active = numba_kernels if numba_kernels is not None else numpy_kernels


def backend_name() -> str:
    """Name of the backend in use: 'numba' or 'numpy'."""
    return "numpy" if active is numpy_kernels else "numba"
