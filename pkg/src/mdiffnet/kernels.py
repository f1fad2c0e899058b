"""Block kernels with a compiled fast path.

The Cython extension ``mdiffnet._kernels`` is used when it has been built;
otherwise the numpy implementations in ``mdiffnet._kernels_py`` are used.
Setting ``MDIFFNET_PURE_PYTHON=1`` forces the numpy path.

All kernels take C-contiguous float64 square arrays whose side is a
multiple of the group size ``m``.  Group size 1 gives elementwise
soft-thresholding.
"""

import os

import numpy as np

from . import _kernels_py

__all__ = [
    "BACKEND",
    "block_norms",
    "group_soft_threshold",
    "wu_update",
    "get_backend",
    "set_backend",
]


def _load():
    if os.environ.get("MDIFFNET_PURE_PYTHON", "") == "1":
        return _kernels_py, "python"
    try:
        from . import _kernels
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "cython"


_impl, BACKEND = _load()


def get_backend(name):
    """Return the kernel module for ``"python"`` or ``"cython"``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")


def set_backend(name):
    """Switch the active backend for this process; returns the previous name."""
    global _impl, BACKEND
    module = get_backend(name)
    previous = BACKEND
    _impl, BACKEND = module, name
    return previous


def _as_c(A):
    return np.ascontiguousarray(A, dtype=np.float64)


def block_norms(A, m):
    """Frobenius norm of every ``m x m`` block."""
    return _impl.block_norms(_as_c(A), int(m))


def group_soft_threshold(A, m, kappa):
    """Scale each block by ``max(0, 1 - kappa / ||block||_F)``.

    Blocks with norm at most ``kappa`` become exactly zero.
    """
    if kappa < 0:
        raise ValueError(f"threshold must be nonnegative, got {kappa}")
    return _impl.group_soft_threshold(_as_c(A), int(m), float(kappa))


def wu_update(delta, u, w, m, kappa):
    """One ADMM W-update and scaled dual update, in place.

    Sets ``w <- prox(delta + u)`` and ``u <- delta + u - w``; returns
    ``(||delta - w_new||_F, ||w_new - w_old||_F)``.  ``u`` and ``w`` must be
    C-contiguous float64 arrays.
    """
    return _impl.wu_update(_as_c(delta), u, w, int(m), float(kappa))
