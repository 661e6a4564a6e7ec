"""Kernel backend selection.

The env var BATHPROBE_BACKEND picks the implementation at import time:
"numba" (default when numba is importable) or "numpy" (pure fallback).
`get_kernels` exposes both for side-by-side benchmarking.
"""
import os

_ENV_VAR = "BATHPROBE_BACKEND"
_cache: dict = {}


def get_kernels(backend):
    """Return the kernel namespace for "numba" or "numpy"."""
    if backend not in _cache:
        if backend == "numba":
            from . import _kernels_numba as impl
        elif backend == "numpy":
            from . import _kernels_numpy as impl
        else:
            raise ValueError(f"unknown kernel backend {backend!r}")
        _cache[backend] = impl
    return _cache[backend]


def _select_backend():
    requested = os.environ.get(_ENV_VAR, "").strip().lower()
    if requested == "numpy":
        return "numpy"
    if requested == "numba":
        return "numba"
    if requested:
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {requested!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


BACKEND = _select_backend()
_active = get_kernels(BACKEND)

jacobi_eig = _active.jacobi_eig
rk4_super = _active.rk4_super
rk4_bloch = _active.rk4_bloch
