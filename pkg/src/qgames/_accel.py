"""Backend selection for the compiled kernels.

Set ``QGAMES_NO_JIT=1`` to force the pure-numpy path (numba is then never
imported).  Both paths are kept bit-compatible, see ``kernels``.
"""
import os

_FLAG = os.environ.get("QGAMES_NO_JIT", "").strip().lower()
JIT_REQUESTED = _FLAG not in ("1", "true", "yes", "on")

njit = None
if JIT_REQUESTED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        njit = None

HAVE_NUMBA = njit is not None
BACKEND = "numba" if HAVE_NUMBA else "numpy"
