"""D-trace loss, its gradient, and the group-lasso penalized objective."""

import numpy as np

from .blockmat import cmap

__all__ = ["dtrace_loss", "loss_gradient", "penalized_loss", "group_penalty"]


def _check(delta, sigma_x, sigma_y):
    delta = np.asarray(delta, dtype=float)
    sigma_x = np.asarray(sigma_x, dtype=float)
    sigma_y = np.asarray(sigma_y, dtype=float)
    shape = delta.shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"delta must be square, got shape {shape}")
    if sigma_x.shape != shape or sigma_y.shape != shape:
        raise ValueError(
            f"dimension mismatch: delta {shape}, sigma_x {sigma_x.shape}, "
            f"sigma_y {sigma_y.shape}")
    return delta, sigma_x, sigma_y


def dtrace_loss(delta, sigma_x, sigma_y):
    """``0.5 * tr(Sx D Sy D^T) - tr(D (Sx - Sy))``."""
    delta, sigma_x, sigma_y = _check(delta, sigma_x, sigma_y)
    # tr(Sx D Sy D^T) = <Sx D Sy, D>
    quad = np.vdot(sigma_x @ delta @ sigma_y, delta)
    lin = np.vdot(delta.T, sigma_x - sigma_y)
    return float(0.5 * quad - lin)


def loss_gradient(delta, sigma_x, sigma_y):
    """Gradient ``Sx D Sy - (Sx - Sy)`` of :func:`dtrace_loss`."""
    delta, sigma_x, sigma_y = _check(delta, sigma_x, sigma_y)
    return sigma_x @ delta @ sigma_y - (sigma_x - sigma_y)


def group_penalty(delta, m):
    """Sum of Frobenius norms over all ``p**2`` blocks, diagonal included."""
    return float(cmap(delta, m).sum())


def penalized_loss(delta, sigma_x, sigma_y, lam, m):
    """D-trace loss plus ``lam`` times the group penalty."""
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    return dtrace_loss(delta, sigma_x, sigma_y) + lam * group_penalty(delta, m)
