"""Kernel selection between numba-compiled loops and plain numpy.

Set ``INTRES_NO_NUMBA=1`` to force the numpy path (also used automatically
when numba cannot be imported).
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("INTRES_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by INTRES_NO_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    _njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
