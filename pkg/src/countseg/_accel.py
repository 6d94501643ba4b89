"""Numba acceleration toggle.

The hot kernels (segment costs, sublevel-set roots, the pruned DP core)
are plain Python functions that get compiled with numba's @njit at import
time.  Setting the environment variable COUNTSEG_NO_NUMBA=1 (or "true")
selects the uncompiled fallback path instead; results are identical, only
slower.  The flag is read once, at first import.
"""

from __future__ import annotations

import os

ENV_FLAG = "COUNTSEG_NO_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes")


try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dep, but stay runnable
    _numba = None

NUMBA_ACTIVE = _numba is not None and not _numba_disabled()

if NUMBA_ACTIVE:
    def njit(func):
        return _numba.njit(cache=True)(func)
else:
    def njit(func):
        return func
