"""Numba switch.

Set ``SANDWICH_SP_NUMBA=0`` to run every hot kernel through its numpy/scipy
fallback instead of the compiled loop. The flag is read once at import.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _flag():
    raw = os.environ.get("SANDWICH_SP_NUMBA", "1").strip().lower()
    return raw not in ("0", "false", "no", "off")


USE_NUMBA = numba is not None and _flag()


def njit(func):
    """Compile ``func`` with numba when available; otherwise return it as is."""
    if numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)
