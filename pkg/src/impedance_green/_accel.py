"""Numba switch.

Hot kernels are compiled with numba when it is importable. Setting the
environment variable ``IMPEDANCE_GREEN_DISABLE_NUMBA=1`` (read once, at import)
routes every kernel call through the vectorised pure-numpy implementations
instead.
"""
import logging
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

_DISABLED = os.environ.get("IMPEDANCE_GREEN_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
    "on",
)

USE_NUMBA = numba is not None and not _DISABLED

if numba is not None:
    logging.getLogger("numba").setLevel(logging.WARNING)


def njit(func):
    """Compile ``func`` in nopython mode when numba is active, else return it."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func
