"""Numeric hot kernels with a compiled core and a pure-numpy fallback.

The Cython extension is optional; when it is missing (e.g. no compiler at
install time) the numpy implementation is selected at import. Both paths
compute the same iteration, so results agree to float tolerance.
"""

from ._hs_numpy import hs_iterate as _hs_iterate_numpy

try:
    from ._hs_cy import hs_iterate as _hs_iterate_compiled

    COMPILED = True
    hs_iterate = _hs_iterate_compiled
except ImportError:
    COMPILED = False
    hs_iterate = _hs_iterate_numpy

hs_iterate_numpy = _hs_iterate_numpy

__all__ = ["hs_iterate", "hs_iterate_numpy", "COMPILED"]
