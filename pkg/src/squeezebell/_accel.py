"""Backend selection for the compiled kernels.

Set ``SQUEEZEBELL_DISABLE_NUMBA=1`` to force the pure-numpy path. When numba
is not importable the numpy path is used automatically.
"""
import os
import warnings

_DISABLED = os.environ.get("SQUEEZEBELL_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False
    if not _DISABLED:
        warnings.warn("numba not installed; falling back to numpy kernels", UserWarning)


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
