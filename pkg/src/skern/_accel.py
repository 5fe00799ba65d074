"""Numba switch.

Hot kernels are compiled with numba unless ``SKERN_DISABLE_NUMBA`` is set to a
truthy value or numba cannot be imported; in that case the vectorised numpy
implementations in :mod:`skern._kernels` are used instead.
"""

import os

_FLAG = os.environ.get("SKERN_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by SKERN_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # bare @njit or @njit(cache=True, ...)
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator


USE_NUMBA = HAVE_NUMBA


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
