"""Hot-loop kernels with a selectable backend.

``TSRMB_BACKEND=numpy`` forces the numpy implementations; otherwise the
numba versions are used when numba imports cleanly. Both backends are
importable directly as ``tsrmb.kernels.numpy_backend`` and
``tsrmb.kernels.numba_backend`` (the latter is None without numba).
"""

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

_requested = os.environ.get("TSRMB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"TSRMB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba" and numba_backend is not None:
    BACKEND = "numba"
    _impl = numba_backend
else:
    BACKEND = "numpy"
    _impl = numpy_backend

hungarian = _impl.hungarian
hopcroft_karp = _impl.hopcroft_karp
floyd_warshall = _impl.floyd_warshall
hall_values = _impl.hall_values

__all__ = ["BACKEND", "hungarian", "hopcroft_karp", "floyd_warshall", "hall_values",
           "numpy_backend", "numba_backend"]
