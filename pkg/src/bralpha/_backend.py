"""Numba/numpy backend selection for the O(N^2) hot loops.

The pairwise summations (sheet velocity, chord-arc and Hölder pair scans)
have two implementations: numba ``@njit`` loops and a pure-numpy broadcast
path.  The environment variable ``BRALPHA_NUMBA`` picks one at import time
(``0``/``false``/``off`` disables numba); numba failing to import also
falls back to numpy.  Both paths are deterministic for a fixed input; they
may differ by floating-point summation order only.
"""

import os

try:
    import numba

    # avoid probing the (possibly too old) TBB layer
    numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _env_wants_numba() -> bool:
    value = os.environ.get("BRALPHA_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "off", "no")


_numba_enabled = HAVE_NUMBA and _env_wants_numba()


def numba_enabled() -> bool:
    return _numba_enabled


def set_numba_enabled(flag: bool) -> None:
    """Override the env-selected backend (used by tests and benchmarks)."""
    global _numba_enabled
    _numba_enabled = bool(flag) and HAVE_NUMBA


def set_threads(n: int) -> None:
    """Set the numba thread count; ``0`` keeps the automatic default."""
    if n > 0 and HAVE_NUMBA:
        import numba

        numba.set_num_threads(n)


def jit_scalar(func):
    """njit a scalar helper when the numba backend is active, else leave it
    as plain Python.  Applied at import time, so the env flag decides."""
    if _numba_enabled:
        import numba

        return numba.njit(cache=True)(func)
    return func
