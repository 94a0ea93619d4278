"""Numba switch.

Hot kernels are compiled with numba when it is importable and the
``HYPERMINHASH_DISABLE_NUMBA`` environment variable is unset (or "0").
Otherwise every kernel falls back to its vectorised numpy twin.
"""

from __future__ import annotations

import os

_flag = os.environ.get("HYPERMINHASH_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by HYPERMINHASH_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
