"""Optional numba acceleration.

Set ``FOLNER_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.  The flag is read once, at import time.
"""
import os

_FLAG = os.environ.get("FOLNER_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(fn):
    """Compile ``fn`` in nopython mode when numba is available at all.

    Compilation happens regardless of ``USE_NUMBA`` so that the benchmark can
    time both paths in one process; dispatch is decided in ``kernels``.
    """
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
