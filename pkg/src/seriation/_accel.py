"""Kernel backend selection.

Hot inner loops live in ``_kernels`` as plain-loop functions. By default they
are compiled with numba; setting the environment variable ``SERIATION_NO_NUMBA``
(to any non-empty value) before import selects the pure-Python/numpy fallback
path, which runs the same code uncompiled and produces identical results.
"""

import os

DISABLE_ENV = "SERIATION_NO_NUMBA"


def numba_enabled() -> bool:
    if os.environ.get(DISABLE_ENV):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = numba_enabled()


def maybe_njit(func=None, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    def wrap(f):
        if USE_NUMBA:
            import numba
            kwargs.setdefault("cache", True)
            return numba.njit(**kwargs)(f)
        return f
    if func is not None:
        return wrap(func)
    return wrap
