"""Two-block ADMM for the group-lasso penalized D-trace loss.

The split is ``min L(Delta) + lam * sum ||W^(kl)||_F`` subject to
``Delta = W``, with scaled dual ``U``.  The Delta-step is a Sylvester-type
linear system solved through the eigendecompositions of the two sample
covariances; the W-step is block soft-thresholding.  Single-attribute mode
thresholds element by element and otherwise runs the same code.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .blockmat import cmap, edges_from_delta, n_nodes, symmetrize
from .loss import penalized_loss
from .results import EstimateResult, SolverReport

__all__ = [
    "AdmmConfig",
    "precompute_eigs",
    "delta_update",
    "group_soft_threshold",
    "check_covariances",
    "zero_is_optimal",
    "solve",
]

MODES = ("ma", "sa")


@dataclass(frozen=True)
class AdmmConfig:
    """ADMM settings.

    Defaults for ``rho0``, ``mu`` and the tolerances are the values used for
    the published experiments.  ``rho_freeze_iter`` defaults to
    ``max_iter // 2``; from that iteration on the penalty is held fixed.
    """

    rho0: float = 2.0
    mu: float = 10.0
    tol_abs: float = 1e-4
    tol_rel: float = 1e-4
    max_iter: int = 1000
    rho_freeze_iter: int | None = None
    mode: str = "ma"
    track_objective: bool = True

    def __post_init__(self):
        for name in ("rho0", "tol_abs", "tol_rel"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.mu > 1:
            raise ValueError(f"mu must exceed 1, got {self.mu}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.rho_freeze_iter is not None and self.rho_freeze_iter < 1:
            raise ValueError("rho_freeze_iter must be a positive integer")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def freeze_iter(self):
        if self.rho_freeze_iter is None:
            return max(1, self.max_iter // 2)
        return self.rho_freeze_iter


def _check_symmetric(S, name, rtol=1e-10):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"{name} must be square, got shape {S.shape}")
    scale = max(1.0, float(np.abs(S).max(initial=0.0)))
    if np.abs(S - S.T).max(initial=0.0) > rtol * scale:
        raise ValueError(f"{name} is not symmetric")
    return symmetrize(S)


def check_covariances(sigma_x, sigma_y, m):
    """Validate and symmetrize a covariance pair; return ``(Sx, Sy, p)``."""
    sigma_x = _check_symmetric(sigma_x, "sigma_x")
    sigma_y = _check_symmetric(sigma_y, "sigma_y")
    if sigma_x.shape != sigma_y.shape:
        raise ValueError(
            f"covariance shapes differ: {sigma_x.shape} vs {sigma_y.shape}")
    return sigma_x, sigma_y, n_nodes(sigma_x, m)


def _check_psd(evals, name):
    scale = max(1.0, float(np.abs(evals).max(initial=0.0)))
    if evals.min() < -1e-8 * scale:
        raise ValueError(
            f"{name} is not positive semidefinite (smallest eigenvalue {evals.min():.3e})")


def precompute_eigs(sigma_x, sigma_y):
    """Eigendecompose both covariances: ``S = Q diag(d) Q^T``.

    Returns ``(Qx, dx, Qy, dy)`` with the eigenvalues as 1-D arrays.  Small
    negative eigenvalues from roundoff are kept as they are.
    """
    sigma_x = _check_symmetric(sigma_x, "sigma_x")
    sigma_y = _check_symmetric(sigma_y, "sigma_y")
    dx, Qx = np.linalg.eigh(sigma_x)
    dy, Qy = np.linalg.eigh(sigma_y)
    return Qx, dx, Qy, dy


def zero_is_optimal(sigma_x, sigma_y, lam, group):
    """True when ``Delta = 0`` satisfies the optimality conditions.

    The gradient at zero is ``-(Sx - Sy)``, so zero is optimal exactly when
    every block of ``Sx - Sy`` has norm at most ``lam``.  Uses the same norm
    routine as the penalty bound so that ``lam = lambda_max`` screens.
    """
    return cmap(sigma_x - sigma_y, group).max() <= lam


def _hadamard_weights(dx, dy, rho):
    return 1.0 / (np.outer(dx, dy) + rho)


def delta_update(Qx, dx, Qy, dy, sigma_x, sigma_y, W, U, rho, weights=None):
    """Minimize ``L(Delta) + rho/2 ||Delta - W + U||_F^2`` in closed form.

    Solves ``(Sy ⊗ Sx + rho I) vec(Delta) = vec(Sx - Sy + rho (W - U))`` as
    ``Qx [B ∘ (Qx^T R Qy)] Qy^T`` with ``B_jk = 1 / (dx_j dy_k + rho)``.
    ``weights`` may carry a precomputed ``B`` for this ``rho``.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if weights is None:
        weights = _hadamard_weights(dx, dy, rho)
    R = (sigma_x - sigma_y) + rho * (W - U)
    return Qx @ (weights * (Qx.T @ R @ Qy)) @ Qy.T


def group_soft_threshold(A, kappa, m, mode="ma"):
    """Proximal map of ``kappa * sum ||block||_F``.

    ``mode="ma"`` shrinks ``m x m`` blocks; ``mode="sa"`` shrinks single
    entries.  Blocks with norm at most ``kappa`` come out exactly zero.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if kappa < 0:
        raise ValueError(f"threshold must be nonnegative, got {kappa}")
    n_nodes(A, m)
    return kernels.group_soft_threshold(A, m if mode == "ma" else 1, kappa)


def solve(sigma_x, sigma_y, lam, m, config=None):
    """Estimate ``Delta = Omega_y - Omega_x`` by ADMM.

    Parameters
    ----------
    sigma_x, sigma_y : ndarray, shape (m*p, m*p)
        Sample covariances, symmetric positive semidefinite.
    lam : float
        Group-lasso penalty, strictly positive.
    m : int
        Attributes per node.
    config : AdmmConfig, optional

    Returns
    -------
    EstimateResult
        ``delta`` is the final ``W`` iterate (exact zero blocks),
        ``delta_sym`` its symmetric part.  Hitting ``max_iter`` is not an
        error; the report then has ``converged=False``.
    """
    cfg = config or AdmmConfig()
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    sigma_x, sigma_y, p = check_covariances(sigma_x, sigma_y, m)
    n = m * p
    group = m if cfg.mode == "ma" else 1
    t0 = time.perf_counter()

    Qx, dx, Qy, dy = precompute_eigs(sigma_x, sigma_y)
    _check_psd(dx, "sigma_x")
    _check_psd(dy, "sigma_y")

    W = np.zeros((n, n))
    U = np.zeros((n, n))
    report = SolverReport(solver="admm", mode=cfg.mode)
    rho = float(cfg.rho0)
    if zero_is_optimal(sigma_x, sigma_y, lam, group):
        report.converged = True
        report.final_rho = rho
        report.elapsed = time.perf_counter() - t0
        return EstimateResult(delta=W, delta_sym=W.copy(), edges=frozenset(),
                              lam=float(lam), m=int(m), report=report)

    weights = _hadamard_weights(dx, dy, rho)
    freeze = cfg.freeze_iter

    i = 0
    while i < cfg.max_iter:
        delta = delta_update(Qx, dx, Qy, dy, sigma_x, sigma_y, W, U, rho, weights)
        ep, dw = kernels.wu_update(delta, U, W, group, lam / rho)
        ed = rho * dw
        tau_pri = n * cfg.tol_abs + cfg.tol_rel * max(np.linalg.norm(delta), np.linalg.norm(W))
        tau_dual = n * cfg.tol_abs + cfg.tol_rel * np.linalg.norm(U) / rho
        report.primal_residuals.append(float(ep))
        report.dual_residuals.append(float(ed))
        report.primal_tolerances.append(float(tau_pri))
        report.dual_tolerances.append(float(tau_dual))
        report.rho_trace.append(rho)
        if cfg.track_objective:
            report.objective_trace.append(penalized_loss(W, sigma_x, sigma_y, lam, group))
        i += 1
        if ep <= tau_pri and ed <= tau_dual:
            report.converged = True
            break
        if i < freeze:
            if ep > cfg.mu * ed:
                rho *= 2.0
                U *= 0.5
                weights = _hadamard_weights(dx, dy, rho)
            elif ed > cfg.mu * ep:
                rho *= 0.5
                U *= 2.0
                weights = _hadamard_weights(dx, dy, rho)

    report.iterations = i
    report.final_rho = rho
    report.elapsed = time.perf_counter() - t0
    delta_sym = symmetrize(W)
    return EstimateResult(
        delta=W,
        delta_sym=delta_sym,
        edges=edges_from_delta(delta_sym, m),
        lam=float(lam),
        m=int(m),
        report=report,
    )
