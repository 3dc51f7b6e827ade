"""Backend selection for the transport solver inner loops.

Two interchangeable implementations exist: a numba ``@njit`` version and a
pure-numpy fallback. The active one is chosen once at import time from the
``LABELOT_BACKEND`` environment variable:

    LABELOT_BACKEND=numba   force numba (raises if numba is unusable)
    LABELOT_BACKEND=numpy   force the pure-numpy path
    unset / auto            numba when importable, numpy otherwise

Both backends implement the same two functions with identical semantics
(``sinkhorn_log`` and ``partial_dykstra_log``); ``benchmarks/bench_solvers.py``
times them against each other.
"""

from __future__ import annotations

import os
import warnings

_CHOICE = os.environ.get("LABELOT_BACKEND", "auto").strip().lower()

if _CHOICE not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"LABELOT_BACKEND must be 'numba', 'numpy' or 'auto', got {_CHOICE!r}")

if _CHOICE == "numpy":
    from . import numpy_backend as _impl
else:
    try:
        from . import numba_backend as _impl
    except ImportError:
        if _CHOICE == "numba":
            raise
        warnings.warn("numba unavailable, falling back to the pure-numpy solver backend")
        from . import numpy_backend as _impl

sinkhorn_log = _impl.sinkhorn_log
partial_dykstra_log = _impl.partial_dykstra_log
BACKEND_NAME = _impl.BACKEND_NAME


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND_NAME
