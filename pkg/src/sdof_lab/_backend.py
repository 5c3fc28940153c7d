"""Selects the compiled decode kernel when available, else the numpy fallback.

Both backends implement identical semantics, so results do not depend on
which one is loaded.
"""

try:
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:  # extension not built
    from . import _kernels_py as _impl
    BACKEND = "python"

nearest_indices = _impl.nearest_indices
count_decode_errors = _impl.count_decode_errors
