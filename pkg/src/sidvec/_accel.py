"""JIT selection for the hot kernels.

Set ``SIDVEC_DISABLE_JIT=1`` to run the pure numpy/Python fallbacks, e.g. for
debugging or on platforms without numba.
"""
import os

_flag = os.environ.get("SIDVEC_DISABLE_JIT", "").strip().lower()

try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and _flag not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is usable, otherwise the identity decorator.

    The original Python function stays reachable as ``.py_func`` either way.
    """
    def wrap(fn):
        if HAS_NUMBA:
            compiled = numba.njit(cache=True, **kwargs)(fn)
        else:  # pragma: no cover
            compiled = fn
            fn.py_func = fn
        return compiled

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return wrap(args[0])
    return wrap


prange = numba.prange if HAS_NUMBA else range


def set_threads(n):
    """Set the numba worker count; returns the count actually used."""
    if not USE_NUMBA:
        return 1
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n
