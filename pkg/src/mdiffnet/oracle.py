"""Brute-force references for auditing solver output.

Everything here works in the vectorized (Kronecker) form of the problem and
shares no code path with the solvers beyond input validation, so it can be
used to certify them.  The dense routines are capped at toy sizes.
"""

from dataclasses import dataclass

import numpy as np

from .blockmat import cmap, n_nodes

__all__ = [
    "KktReport",
    "direct_delta_update",
    "kkt_residual",
    "brute_force_minimize",
    "lambda_max",
]

DIRECT_MAX_SIDE = 16
BRUTE_MAX_SIDE = 6


@dataclass(frozen=True)
class KktReport:
    """Worst violations of the group-lasso subgradient conditions.

    ``max_active_violation`` is the largest ``||G_b + lam * D_b / ||D_b||_F||_F``
    over nonzero blocks ``D_b``; ``max_inactive_violation`` the largest
    ``max(0, ||G_b||_F - lam)`` over zero blocks, with ``G`` the loss gradient.
    """

    max_active_violation: float
    max_inactive_violation: float
    n_active: int
    n_inactive: int

    def within(self, tol):
        return self.max_active_violation <= tol and self.max_inactive_violation <= tol

    def to_dict(self):
        return {
            "max_active_violation": self.max_active_violation,
            "max_inactive_violation": self.max_inactive_violation,
            "n_active": self.n_active,
            "n_inactive": self.n_inactive,
        }


def _vec(A):
    return np.asarray(A, dtype=float).ravel(order="F")


def _unvec(v, n):
    return v.reshape((n, n), order="F")


def direct_delta_update(sigma_x, sigma_y, W, U, rho):
    """Solve ``(Sy ⊗ Sx + rho I) vec(Delta) = vec(Sx - Sy + rho (W - U))``.

    Dense factorization of the ``(mp)^2``-sized system; only for ``mp <= 16``.
    """
    sigma_x = np.asarray(sigma_x, dtype=float)
    sigma_y = np.asarray(sigma_y, dtype=float)
    n = sigma_x.shape[0]
    if n > DIRECT_MAX_SIDE:
        raise ValueError(f"direct solve limited to side <= {DIRECT_MAX_SIDE}, got {n}")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    H = np.kron(sigma_y, sigma_x) + rho * np.eye(n * n)
    rhs = _vec(sigma_x - sigma_y + rho * (np.asarray(W) - np.asarray(U)))
    return _unvec(np.linalg.solve(H, rhs), n)


def kkt_residual(delta, sigma_x, sigma_y, lam, m):
    """Check the subgradient optimality conditions at ``delta``.

    ``m`` is the penalty group size: the attribute count for the
    multi-attribute penalty, 1 for the elementwise one.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    delta = np.asarray(delta, dtype=float)
    sigma_x = np.asarray(sigma_x, dtype=float)
    sigma_y = np.asarray(sigma_y, dtype=float)
    p = n_nodes(delta, m)
    G = sigma_x @ delta @ sigma_y - (sigma_x - sigma_y)
    Gb = G.reshape(p, m, p, m)
    Db = delta.reshape(p, m, p, m)
    norms = cmap(delta, m)
    active = norms > 0

    worst_active = 0.0
    for k, l in zip(*np.nonzero(active)):
        r = Gb[k, :, l, :] + lam * Db[k, :, l, :] / norms[k, l]
        worst_active = max(worst_active, float(np.linalg.norm(r)))
    gnorms = cmap(G, m)
    slack = np.where(active, 0.0, gnorms - lam)
    worst_inactive = float(max(0.0, slack.max(initial=0.0)))
    return KktReport(
        max_active_violation=worst_active,
        max_inactive_violation=worst_inactive,
        n_active=int(active.sum()),
        n_inactive=int((~active).sum()),
    )


def lambda_max(sigma_x, sigma_y, m):
    """Largest block Frobenius norm of ``Sx - Sy``.

    For any penalty at or above this value ``Delta = 0`` satisfies the
    optimality conditions, so the estimate is empty.
    """
    return float(cmap(np.asarray(sigma_x) - np.asarray(sigma_y), m).max())


def _group_index(n, m):
    """Group label of each entry of vec(Delta) under the block partition."""
    rows = np.arange(n)[:, None] // m
    cols = np.arange(n)[None, :] // m
    p = n // m
    return _vec(rows * p + cols).astype(int)


def _group_prox(v, groups, n_groups, kappa):
    sq = np.bincount(groups, weights=v * v, minlength=n_groups)
    norms = np.sqrt(sq)
    factors = np.where(norms > kappa, 1.0 - kappa / np.where(norms > 0, norms, 1.0), 0.0)
    return v * factors[groups]


def _objective(theta, H, b, groups, n_groups, lam):
    penalty = np.sqrt(np.bincount(groups, weights=theta * theta, minlength=n_groups)).sum()
    return 0.5 * theta @ H @ theta - b @ theta + lam * penalty


def brute_force_minimize(sigma_x, sigma_y, lam, m, n_restarts=3, max_iter=20_000,
                         kkt_tol=1e-7, seed=0):
    """Minimize the penalized D-trace loss on a toy problem.

    Uses restarted accelerated proximal gradient on the explicit
    ``(mp)^2 x (mp)^2`` Hessian ``Sy ⊗ Sx`` from several starting points
    and keeps the best objective.  Each run stops once the KKT violations
    drop below ``kkt_tol * lam``.  Only for ``mp <= 6``.
    """
    sigma_x = np.asarray(sigma_x, dtype=float)
    sigma_y = np.asarray(sigma_y, dtype=float)
    n = sigma_x.shape[0]
    if n > BRUTE_MAX_SIDE:
        raise ValueError(f"brute force limited to side <= {BRUTE_MAX_SIDE}, got {n}")
    p = n_nodes(sigma_x, m)
    H = np.kron(sigma_y, sigma_x)
    b = _vec(sigma_x - sigma_y)
    L = float(np.linalg.eigvalsh(H).max())
    if not L > 0:
        return np.zeros((n, n))
    step = 1.0 / L
    groups = _group_index(n, m)
    n_groups = p * p
    rng = np.random.default_rng(seed)

    starts = [np.zeros(n * n)]
    try:
        starts.append(np.linalg.lstsq(H, b, rcond=None)[0])
    except np.linalg.LinAlgError:
        pass
    while len(starts) < n_restarts:
        starts.append(rng.normal(scale=1.0, size=n * n))

    best, best_val = None, np.inf
    for theta in starts:
        x = theta.copy()
        y = x.copy()
        t = 1.0
        f_prev = _objective(x, H, b, groups, n_groups, lam)
        for it in range(max_iter):
            x_new = _group_prox(y - step * (H @ y - b), groups, n_groups, step * lam)
            f_new = _objective(x_new, H, b, groups, n_groups, lam)
            if f_new > f_prev:
                # adaptive restart: drop momentum, keep x
                t = 1.0
                y = x.copy()
            else:
                t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
                y = x_new + ((t - 1.0) / t_new) * (x_new - x)
                x, t, f_prev = x_new, t_new, f_new
            if it % 25 == 0 and kkt_residual(_unvec(x, n), sigma_x, sigma_y, lam, m).within(kkt_tol * lam):
                break
        val = _objective(x, H, b, groups, n_groups, lam)
        if val < best_val:
            best, best_val = x, val
    return _unvec(best, n).copy()
