import numpy as np
import pytest

from mdiffnet.blockmat import (all_pairs, block_view, bvec, cmap, edges_from_delta,
                               n_nodes, symmetrize, tracy_singh)


def test_n_nodes_rejects_bad_shapes():
    with pytest.raises(ValueError):
        n_nodes(np.zeros((4, 5)), 2)
    with pytest.raises(ValueError):
        n_nodes(np.zeros((5, 5)), 2)
    with pytest.raises(ValueError):
        n_nodes(np.zeros((4, 4)), 0)
    assert n_nodes(np.zeros((6, 6)), 3) == 2


def test_block_view_identity():
    I = np.eye(4)
    np.testing.assert_array_equal(block_view(I, 2, 0, 0), np.eye(2))
    np.testing.assert_array_equal(block_view(I, 2, 0, 1), np.zeros((2, 2)))


def test_block_view_addressing():
    # entries 10 i + j with one-based i, j
    A = np.array([[10 * i + j for j in range(1, 5)] for i in range(1, 5)], dtype=float)
    np.testing.assert_array_equal(block_view(A, 2, 1, 0), [[31, 32], [41, 42]])


def test_block_view_out_of_range():
    with pytest.raises(IndexError):
        block_view(np.eye(4), 2, 2, 0)
    with pytest.raises(IndexError):
        block_view(np.eye(4), 2, 0, -1)


def test_cmap_examples():
    np.testing.assert_array_equal(cmap(np.zeros((6, 6)), 2), np.zeros((3, 3)))
    np.testing.assert_allclose(cmap(np.eye(6), 3), np.sqrt(3) * np.eye(2))
    A = np.zeros((4, 4))
    A[0:2, 2:4] = 1.0
    np.testing.assert_array_equal(cmap(A, 2), [[0, 2], [0, 0]])


def test_bvec_m1_is_column_major(rng):
    A = rng.standard_normal((5, 5))
    np.testing.assert_array_equal(bvec(A, 1), A.ravel(order="F"))
    np.testing.assert_array_equal(bvec(np.zeros((4, 4)), 2), np.zeros(16))


def test_bvec_hand_enumeration():
    A = np.arange(16, dtype=float).reshape(4, 4)
    # blocks A11, A21, A12, A22 in turn, each column-major
    expected = []
    for bc in range(2):
        for br in range(2):
            blk = A[2 * br:2 * br + 2, 2 * bc:2 * bc + 2]
            expected += [blk[0, 0], blk[1, 0], blk[0, 1], blk[1, 1]]
    np.testing.assert_array_equal(bvec(A, 2), expected)
    np.testing.assert_array_equal(bvec(A, 2)[:8], [0, 4, 1, 5, 8, 12, 9, 13])


def test_tracy_singh_scalar_blocks_is_kron(rng):
    A = rng.standard_normal((3, 3))
    B = rng.standard_normal((2, 2))
    np.testing.assert_allclose(tracy_singh(A, 1, B, 1), np.kron(A, B), atol=1e-15)


def test_tracy_singh_identity():
    np.testing.assert_array_equal(tracy_singh(np.eye(4), 2, np.eye(6), 3), np.eye(24))


def test_tracy_singh_block_layout(rng):
    A = rng.standard_normal((4, 4))
    B = rng.standard_normal((6, 6))
    T = tracy_singh(A, 2, B, 3)
    # block (i, j) of T is A_ij ⊠ B, whose (k, l) block is A_ij ⊗ B_kl
    side = 2 * 6
    for i in range(2):
        for j in range(2):
            Tij = T[i * side:(i + 1) * side, j * side:(j + 1) * side]
            for k in range(2):
                for l in range(2):
                    blk = Tij[k * 6:(k + 1) * 6, l * 6:(l + 1) * 6]
                    np.testing.assert_allclose(
                        blk, np.kron(A[2 * i:2 * i + 2, 2 * j:2 * j + 2],
                                     B[3 * k:3 * k + 3, 3 * l:3 * l + 3]), atol=1e-15)


def test_bvec_identity(rng):
    for m, p in [(2, 2), (1, 4), (3, 2)]:
        n = m * p
        A, B, D = (rng.standard_normal((n, n)) for _ in range(3))
        lhs = bvec(A @ D @ B, m)
        rhs = tracy_singh(B.T, m, A, m) @ bvec(D, m)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_cmap_of_tracy_singh_is_outer_product(rng):
    A = rng.standard_normal((4, 4))
    B = rng.standard_normal((4, 4))
    C = cmap(tracy_singh(A, 2, B, 2), 4)
    np.testing.assert_allclose(C, np.kron(cmap(A, 2), cmap(B, 2)), atol=1e-12)


def test_symmetrize_examples(rng):
    S = rng.standard_normal((4, 4))
    S = S + S.T
    np.testing.assert_array_equal(symmetrize(S), S)
    K = rng.standard_normal((4, 4))
    np.testing.assert_array_equal(symmetrize(K - K.T), np.zeros((4, 4)))
    np.testing.assert_array_equal(symmetrize(np.array([[0, 1.0], [3.0, 0]])), [[0, 2], [2, 0]])


def test_edges_from_delta_examples():
    assert edges_from_delta(np.zeros((6, 6)), 2) == frozenset()
    D = np.zeros((6, 6))
    D[0:2, 2:4] = 1.0
    D[2:4, 0:2] = 1.0
    assert edges_from_delta(D, 2) == {(0, 1)}
    assert edges_from_delta(np.eye(6), 2) == frozenset()


def test_edges_from_delta_rejects_asymmetric():
    D = np.zeros((4, 4))
    D[0, 3] = 1.0
    with pytest.raises(ValueError):
        edges_from_delta(D, 2)


def test_edges_from_delta_no_fuzz():
    D = np.zeros((4, 4))
    D[0, 2] = D[2, 0] = 1e-300
    assert edges_from_delta(D, 2) == {(0, 1)}


def test_all_pairs():
    assert all_pairs(4) == {(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)}
    assert all_pairs(1) == frozenset()
