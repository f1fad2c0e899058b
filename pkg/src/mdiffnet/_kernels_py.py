"""Pure-numpy kernels; reference behaviour for the compiled module."""

import numpy as np


def block_norms(A, m):
    p = A.shape[0] // m
    B = A.reshape(p, m, p, m)
    return np.sqrt(np.einsum("iajb,iajb->ij", B, B))


def _shrink_factors(norms, kappa):
    # norm <= kappa (including norm == 0) maps to an exactly zero block
    factors = np.zeros_like(norms)
    keep = norms > kappa
    factors[keep] = 1.0 - kappa / norms[keep]
    return factors


def group_soft_threshold(A, m, kappa):
    p = A.shape[0] // m
    factors = _shrink_factors(block_norms(A, m), kappa)
    out = A.reshape(p, m, p, m) * factors[:, None, :, None]
    return out.reshape(A.shape)


def wu_update(delta, u, w, m, kappa):
    a = delta + u
    w_new = group_soft_threshold(a, m, kappa)
    ep = np.linalg.norm(delta - w_new)
    dw = np.linalg.norm(w_new - w)
    w[...] = w_new
    u[...] = a - w_new
    return ep, dw
