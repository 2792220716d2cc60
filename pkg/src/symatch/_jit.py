"""Numba switch.

Set ``SYMATCH_DISABLE_NUMBA=1`` to run every kernel on the pure numpy/python
path. The flag is read once at import time.
"""
import os

_FLAG = os.environ.get("SYMATCH_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(func):
    """Compile ``func`` with numba when available; keep ``func.py_func`` either way."""
    if not USE_NUMBA:
        func.py_func = func
        return func
    from numba import njit as _njit

    return _njit(cache=True, nogil=True)(func)
