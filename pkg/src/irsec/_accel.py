"""Numba acceleration switch.

Hot kernels (the conjugate-gradient phase optimizer and the assignment
solver) ship in two versions: a numba @njit loop kernel and a vectorized
pure-numpy twin.  The jitted path is used when numba imports cleanly and
the environment variable ``IRSEC_DISABLE_NUMBA`` is unset; setting it to
1/true/yes forces the numpy path.  ``benchmarks/bench_kernels.py``
compares both.
"""

import os

_flag = os.environ.get("IRSEC_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag in ("1", "true", "yes", "on")

if NUMBA_DISABLED:
    HAVE_NUMBA = False
    njit = None
else:
    try:
        from numba import njit  # noqa: F401
        HAVE_NUMBA = True
    except ImportError:
        HAVE_NUMBA = False
        njit = None

NUMBA_ENABLED = HAVE_NUMBA and not NUMBA_DISABLED
