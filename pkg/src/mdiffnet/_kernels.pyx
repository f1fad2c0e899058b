# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled block kernels for the ADMM and proximal-gradient loops."""

import numpy as np
from libc.math cimport sqrt


def block_norms(double[:, ::1] A, Py_ssize_t m):
    cdef Py_ssize_t p = A.shape[0] // m
    cdef Py_ssize_t k, l, r, s
    cdef double acc, v
    out = np.empty((p, p), dtype=np.float64)
    cdef double[:, ::1] o = out
    for k in range(p):
        for l in range(p):
            acc = 0.0
            for r in range(k * m, (k + 1) * m):
                for s in range(l * m, (l + 1) * m):
                    v = A[r, s]
                    acc += v * v
            o[k, l] = sqrt(acc)
    return out


def group_soft_threshold(double[:, ::1] A, Py_ssize_t m, double kappa):
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t p = n // m
    cdef Py_ssize_t k, l, r, s
    cdef double acc, v, norm, factor
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    for k in range(p):
        for l in range(p):
            acc = 0.0
            for r in range(k * m, (k + 1) * m):
                for s in range(l * m, (l + 1) * m):
                    v = A[r, s]
                    acc += v * v
            norm = sqrt(acc)
            factor = 1.0 - kappa / norm if norm > kappa else 0.0
            for r in range(k * m, (k + 1) * m):
                for s in range(l * m, (l + 1) * m):
                    o[r, s] = factor * A[r, s]
    return out


def wu_update(double[:, ::1] delta, double[:, ::1] u, double[:, ::1] w,
              Py_ssize_t m, double kappa):
    """Fused W-update, dual update and residual norms, in place on w and u."""
    cdef Py_ssize_t n = delta.shape[0]
    cdef Py_ssize_t p = n // m
    cdef Py_ssize_t k, l, r, s
    cdef double acc, a, norm, factor, wn, d
    cdef double ep2 = 0.0, dw2 = 0.0
    for k in range(p):
        for l in range(p):
            acc = 0.0
            for r in range(k * m, (k + 1) * m):
                for s in range(l * m, (l + 1) * m):
                    a = delta[r, s] + u[r, s]
                    acc += a * a
            norm = sqrt(acc)
            factor = 1.0 - kappa / norm if norm > kappa else 0.0
            for r in range(k * m, (k + 1) * m):
                for s in range(l * m, (l + 1) * m):
                    a = delta[r, s] + u[r, s]
                    wn = factor * a
                    d = delta[r, s] - wn
                    ep2 += d * d
                    d = wn - w[r, s]
                    dw2 += d * d
                    w[r, s] = wn
                    u[r, s] = a - wn
    return sqrt(ep2), sqrt(dw2)
