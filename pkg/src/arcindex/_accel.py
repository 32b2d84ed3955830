"""Optional numba acceleration.

Set ``ARCINDEX_DISABLE_NUMBA=1`` to run the kernels as plain Python/numpy;
results are identical, only slower.
"""

import os

DISABLED = os.environ.get("ARCINDEX_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

ENABLED = numba is not None and not DISABLED


def njit(fn):
    if ENABLED:
        return numba.njit(cache=True)(fn)
    return fn
