"""Synthetic ground truth for differential graph benchmarks.

Random draws come from a ``numpy.random.Generator`` passed in by the caller
(``numpy.random.default_rng(seed)``, i.e. PCG64), so every output is
reproducible from a single seed.  Nodes are zero-based.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .blockmat import edges_from_delta
from .covariance import MultiAttributeDataset
from .exceptions import DegenerateInputError

__all__ = [
    "GraphSpec",
    "GroundTruth",
    "er_edges",
    "ba_edges",
    "build_precision_x",
    "build_delta",
    "make_pair",
    "sample_gaussian",
]

GAMMA_MARGIN = 0.5
DELTA_VALUE = 0.9
OFFDIAG_RANGE = (0.1, 0.4)


@dataclass(frozen=True)
class GraphSpec:
    """Graph family for the ``Omega_x`` support."""

    kind: str = "er"
    p: int = 100
    er_prob: float = 0.5
    mean_degree: float = 2.0

    def __post_init__(self):
        if self.kind not in ("er", "ba"):
            raise ValueError(f"kind must be 'er' or 'ba', got {self.kind!r}")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"p must be a positive integer, got {self.p}")
        if not 0.0 <= self.er_prob <= 1.0:
            raise ValueError(f"er_prob must lie in [0, 1], got {self.er_prob}")
        if not self.mean_degree >= 1:
            raise ValueError(f"mean_degree must be >= 1, got {self.mean_degree}")
        if self.kind == "ba" and self.p < 3:
            raise ValueError("BA graphs need p >= 3")

    def to_dict(self):
        return {"kind": self.kind, "p": self.p, "er_prob": self.er_prob,
                "mean_degree": self.mean_degree}


@dataclass
class GroundTruth:
    """Two precision matrices and their exact difference."""

    omega_x: np.ndarray
    omega_y: np.ndarray
    delta: np.ndarray
    edges: frozenset
    gamma: float
    m: int
    graph_edges: frozenset = field(default_factory=frozenset)

    @property
    def p(self):
        return self.omega_x.shape[0] // self.m


def er_edges(p, prob, rng):
    """Each of the ``p(p-1)/2`` pairs independently with probability ``prob``."""
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"prob must lie in [0, 1], got {prob}")
    rows, cols = np.triu_indices(p, k=1)
    keep = rng.random(rows.size) < prob
    return frozenset(zip(rows[keep].tolist(), cols[keep].tolist()))


def ba_edges(p, mean_degree, rng):
    """Preferential-attachment graph.

    Each arriving node links to ``k = max(1, round(mean_degree / 2))``
    distinct existing nodes drawn with probability proportional to degree.
    The seed is a complete graph on ``max(3, k + 1)`` nodes, a triangle for
    the default mean degree of 2, which then gives exactly ``p`` edges.
    """
    k = max(1, int(round(mean_degree / 2)))
    n_seed = max(3, k + 1)
    if p < n_seed:
        raise ValueError(f"p must be at least {n_seed}, got {p}")
    edges = {(i, j) for i in range(n_seed) for j in range(i + 1, n_seed)}
    degree = np.zeros(p)
    degree[:n_seed] = n_seed - 1
    for new in range(n_seed, p):
        weights = degree[:new] / degree[:new].sum()
        targets = rng.choice(new, size=k, replace=False, p=weights)
        for t in sorted(targets.tolist()):
            edges.add((t, new))
            degree[t] += 1
        degree[new] = k
    return frozenset(edges)


def _toeplitz_block(m):
    idx = np.arange(m)
    return 0.5 ** np.abs(idx[:, None] - idx[None, :])


def build_precision_x(edges, p, m, rng):
    """Symmetric (not necessarily PD) precision matrix on the given support.

    Diagonal blocks are ``0.5**|s - t|``; each edge block has independent
    entries uniform on ``[-0.4, -0.1] ∪ [0.1, 0.4]``.
    """
    omega = np.zeros((m * p, m * p))
    diag = _toeplitz_block(m)
    for j in range(p):
        omega[j * m:(j + 1) * m, j * m:(j + 1) * m] = diag
    lo, hi = OFFDIAG_RANGE
    for j, k in sorted(edges):
        if not (0 <= j < k < p):
            raise ValueError(f"invalid edge {(j, k)} for p={p}")
        mags = rng.uniform(lo, hi, size=(m, m))
        signs = np.where(rng.random((m, m)) < 0.5, -1.0, 1.0)
        block = signs * mags
        omega[j * m:(j + 1) * m, k * m:(k + 1) * m] = block
        omega[k * m:(k + 1) * m, j * m:(j + 1) * m] = block.T
    return omega


def build_delta(p, m, prob, rng):
    """Sparse symmetric difference with ER(``prob``) block support.

    Every entry of a selected block is ``+0.9`` or ``-0.9`` with equal
    probability; block ``(k, j)`` is the transpose of block ``(j, k)``.
    Returns ``(delta, edges)``.
    """
    edges = er_edges(p, prob, rng)
    delta = np.zeros((m * p, m * p))
    for j, k in sorted(edges):
        block = np.where(rng.random((m, m)) < 0.5, -DELTA_VALUE, DELTA_VALUE)
        delta[j * m:(j + 1) * m, k * m:(k + 1) * m] = block
        delta[k * m:(k + 1) * m, j * m:(j + 1) * m] = block.T
    return delta, edges


def make_pair(spec, m, delta_prob, rng):
    """Draw ``(Omega_x, Omega_y = Omega_x + Delta)`` and shift both to be PD.

    The common diagonal shift is
    ``gamma = max(0, -phi_min(Omega_x), -phi_min(Omega_y)) + 0.5``, so both
    matrices have smallest eigenvalue at least 0.5.  ``GroundTruth.delta``
    is ``omega_y - omega_x`` as stored, which matches the drawn difference
    up to one rounding of ``Omega_x + Delta``.
    """
    if spec.kind == "er":
        graph = er_edges(spec.p, spec.er_prob, rng)
    else:
        graph = ba_edges(spec.p, spec.mean_degree, rng)
    omega_x = build_precision_x(graph, spec.p, m, rng)
    delta, _ = build_delta(spec.p, m, delta_prob, rng)
    omega_y = omega_x + delta
    lo_x = np.linalg.eigvalsh(omega_x)[0]
    lo_y = np.linalg.eigvalsh(omega_y)[0]
    gamma = float(max(0.0, -lo_x, -lo_y) + GAMMA_MARGIN)
    shift = gamma * np.eye(m * spec.p)
    omega_x = omega_x + shift
    omega_y = omega_y + shift
    diff = omega_y - omega_x
    return GroundTruth(
        omega_x=omega_x,
        omega_y=omega_y,
        delta=diff,
        edges=edges_from_delta(diff, m),
        gamma=gamma,
        m=int(m),
        graph_edges=graph,
    )


def sample_gaussian(omega, n, rng, m=1):
    """Draw ``n`` zero-mean rows with covariance ``inv(omega)``.

    Rows are ``Phi w`` with ``Phi`` the lower Cholesky factor of
    ``inv(omega)`` and ``w`` standard normal.
    """
    omega = np.asarray(omega, dtype=float)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    try:
        chol = scipy.linalg.cho_factor(omega, lower=True)
    except np.linalg.LinAlgError as exc:
        raise DegenerateInputError("precision matrix is not positive definite") from exc
    cov = scipy.linalg.cho_solve(chol, np.eye(omega.shape[0]))
    phi = np.linalg.cholesky(0.5 * (cov + cov.T))
    w = rng.standard_normal((n, omega.shape[0]))
    return MultiAttributeDataset(w @ phi.T, m)
