"""Backend selection for the hot kernels.

Set ``RRSPECTRAL_NO_NUMBA=1`` (or ``RRSPECTRAL_BACKEND=numpy``) before import to
force the vectorised numpy path. Otherwise numba is used when importable.
"""
import os

_flag = os.environ.get("RRSPECTRAL_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")
_backend = os.environ.get("RRSPECTRAL_BACKEND", "").strip().lower()

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _flag and _backend != "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or an identity decorator without numba."""
    if HAS_NUMBA:
        import numba

        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

    def deco(fn):
        return fn

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return deco


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
