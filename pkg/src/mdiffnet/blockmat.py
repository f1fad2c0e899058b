"""Block-partitioned square matrices.

A matrix of side ``m * p`` is viewed as a ``p x p`` grid of ``m x m`` blocks.
Block ``(k, l)`` covers rows ``k*m:(k+1)*m`` and columns ``l*m:(l+1)*m``.
Node indices are zero-based throughout the package.

Matrices are stored as dense ``numpy`` arrays and the attribute count ``m``
is passed alongside; the node count ``p`` is always inferred.
"""

import numpy as np

__all__ = [
    "n_nodes",
    "block_view",
    "cmap",
    "bvec",
    "tracy_singh",
    "symmetrize",
    "edges_from_delta",
    "all_pairs",
]


def n_nodes(M, m):
    """Return ``p`` for a square matrix ``M`` of side ``m * p``.

    Raises ``ValueError`` if ``M`` is not square or its side is not a
    multiple of ``m``.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    side = M.shape[0]
    if side == 0 or side % m:
        raise ValueError(f"matrix side {side} is not a positive multiple of m={m}")
    return side // m


def _blocks(M, m):
    # axes: (block row, row in block, block col, col in block)
    p = n_nodes(M, m)
    return np.asarray(M).reshape(p, m, p, m)


def block_view(M, m, k, l):
    """Return the ``(k, l)`` block of ``M`` as an ``m x m`` view."""
    p = n_nodes(M, m)
    for idx in (k, l):
        if not 0 <= idx < p:
            raise IndexError(f"block index {idx} out of range for p={p}")
    return np.asarray(M)[k * m:(k + 1) * m, l * m:(l + 1) * m]


def cmap(M, m):
    """Frobenius norm of every block, as a ``p x p`` array."""
    B = _blocks(M, m)
    return np.sqrt(np.einsum("iajb,iajb->ij", B, B))


def bvec(M, m):
    """Stack the column-major vectorized blocks of ``M``.

    Blocks are visited down each block column, block columns left to right.
    With ``m == 1`` this is ordinary column-major vectorization.
    """
    B = _blocks(M, m)
    # slowest to fastest: block col, block row, col in block, row in block
    return B.transpose(2, 0, 3, 1).ravel()


def tracy_singh(A, m_a, B, m_b):
    """Tracy-Singh product ``A ⊠ B`` of two block-partitioned matrices.

    The result is ``[[A_ij ⊗ B_kl]_kl]_ij`` and satisfies
    ``bvec(A @ D @ B) == tracy_singh(B.T, m, A, m) @ bvec(D)``.
    """
    A4 = _blocks(A, m_a)
    B4 = _blocks(B, m_b)
    n = A4.shape[0] * m_a * B4.shape[0] * m_b
    T = np.einsum("iajb,kcld->ikacjlbd", A4, B4)
    return T.reshape(n, n)


def symmetrize(M):
    """Return ``(M + M.T) / 2``; the result is exactly symmetric."""
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + M.T)


def edges_from_delta(delta, m):
    """Edge set ``{(k, l) : k < l, ||delta^(kl)||_F > 0}``.

    ``delta`` must be exactly symmetric.  No tolerance is applied: blocks
    produced by group soft-thresholding are either exactly zero or not.
    A block counts as nonzero if any entry is, which avoids the squared
    norm underflowing for tiny entries.
    """
    delta = np.asarray(delta)
    n_nodes(delta, m)
    if not np.array_equal(delta, delta.T):
        raise ValueError("edges_from_delta requires an exactly symmetric matrix")
    nonzero = np.any(_blocks(delta, m) != 0, axis=(1, 3))
    rows, cols = np.nonzero(np.triu(nonzero, k=1))
    return frozenset(zip(rows.tolist(), cols.tolist()))


def all_pairs(p):
    """All unordered node pairs ``(k, l)`` with ``k < l``."""
    return frozenset((k, l) for k in range(p) for l in range(k + 1, p))
