"""Kernel backend selection.

Hot numeric kernels exist twice: a numba @njit version (loops) and a pure
numpy version (vectorized, chunked). The numba path is the default whenever
numba imports; setting GAUSSPERIM_DISABLE_NUMBA=1 forces the numpy path.
Both implement the same signatures and are cross-checked in the test suite.
"""

import os

_FLAG = os.environ.get("GAUSSPERIM_DISABLE_NUMBA", "0").strip().lower()
NUMBA_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    import numba  # noqa: F401
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not NUMBA_DISABLED

if USE_NUMBA:
    from . import _kernels_nb as _impl
else:
    from . import _kernels_np as _impl

hermite_tables = _impl.hermite_tables
field_values = _impl.field_values
field_jacobian = _impl.field_jacobian
raw_divstar = _impl.raw_divstar
squash_divstar = _impl.squash_divstar
squash_gradient = _impl.squash_gradient
greedy_cover_idx = _impl.greedy_cover_idx
nn_distances = _impl.nn_distances


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
