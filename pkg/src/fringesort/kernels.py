"""Counting kernels, compiled when available.

``BACKEND`` is ``"cython"`` if the extension module imported, else
``"python"``.  Both backends return identical counts for identical input.
"""
try:
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    from . import _pykernels as _impl

    BACKEND = "python"

quicksort_counts = _impl.quicksort_counts
fringe_counts = _impl.fringe_counts
inverse_cdf = _impl.inverse_cdf

__all__ = ["BACKEND", "quicksort_counts", "fringe_counts", "inverse_cdf"]
