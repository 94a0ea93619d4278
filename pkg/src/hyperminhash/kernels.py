"""Backend dispatch for the hot loops.

Import kernels from here, not from the backend modules; the backend is
chosen once at import time (see ``_accel``).
"""

from __future__ import annotations

from . import _kernels_numpy
from ._accel import HAVE_NUMBA, backend

if HAVE_NUMBA:
    from . import _kernels_numba as _impl
else:
    _impl = _kernels_numpy

words_u64 = _impl.words_u64
words_bytes = _impl.words_bytes
clz64 = _impl.clz64
rho = _impl.rho
hmh_update = _impl.hmh_update
mh_update = _impl.mh_update
top_bits = _kernels_numpy.top_bits
hmh_registers = _kernels_numpy.hmh_registers

__all__ = [
    "backend",
    "clz64",
    "hmh_registers",
    "hmh_update",
    "mh_update",
    "rho",
    "top_bits",
    "words_bytes",
    "words_u64",
]
