"""Backend selection for the hot kernels.

The compiled extension is used when it imports and ``PFLAB_PURE`` is unset;
otherwise the pure-Python reference kernels are used. Instances beyond 64
vertices or edges always go to the pure-Python path.
"""
import os

from . import _pykernels

try:
    if os.environ.get("PFLAB_PURE"):
        raise ImportError("pure backend forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def enumerate_matchings(n, nbrs, cap):
    if _ckernels is not None and n <= 64 and all(e < 64 for ns in nbrs for _, e in ns):
        return _ckernels.enumerate_matchings(n, nbrs, cap)
    return _pykernels.enumerate_matchings(n, nbrs, cap)


def orientation_sweep(factor_masks, base_parities, lo, hi):
    if _ckernels is not None and all(m < (1 << 64) for m in factor_masks) and hi <= (1 << 63):
        return _ckernels.orientation_sweep(list(factor_masks), list(base_parities), lo, hi)
    return _pykernels.orientation_sweep(factor_masks, base_parities, lo, hi)


def thread_count():
    try:
        return max(1, int(os.environ.get("PFLAB_THREADS", "0")) or os.cpu_count() or 1)
    except ValueError:
        return 1
