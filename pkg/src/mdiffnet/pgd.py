"""Proximal gradient descent for the group-lasso penalized D-trace loss.

Plain (non-accelerated) forward-backward iterations with the constant step
``1 / (phi_max(Sx) * phi_max(Sy))``, the reciprocal Lipschitz constant of the
loss gradient.  Mainly a cross-check for the ADMM solver.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .admm import MODES, check_covariances, zero_is_optimal
from .exceptions import DegenerateInputError
from .blockmat import edges_from_delta, symmetrize
from .loss import penalized_loss
from .results import EstimateResult, SolverReport

__all__ = ["PgdConfig", "step_size", "solve"]


@dataclass(frozen=True)
class PgdConfig:
    """Settings for :func:`solve`; ``eps`` = 1e-3 is the published value."""

    eps: float = 1e-3
    max_iter: int = 5000
    mode: str = "ma"

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


def step_size(sigma_x, sigma_y):
    """Return ``1 / (phi_max(Sx) * phi_max(Sy))``.

    Raises ``ValueError`` if either covariance is not positive semidefinite
    or has a zero largest eigenvalue.
    """
    bounds = []
    for name, S in (("sigma_x", sigma_x), ("sigma_y", sigma_y)):
        evals = np.linalg.eigvalsh(np.asarray(S, dtype=float))
        top = float(evals[-1])
        if not top > 0:
            raise DegenerateInputError(f"{name} has no positive eigenvalue; step size undefined")
        if evals[0] < -1e-8 * top:
            raise ValueError(
                f"{name} is not positive semidefinite (smallest eigenvalue {evals[0]:.3e})")
        bounds.append(top)
    return 1.0 / (bounds[0] * bounds[1])


def solve(sigma_x, sigma_y, lam, m, config=None):
    """Estimate ``Delta = Omega_y - Omega_x`` by proximal gradient descent.

    Stops when ``|L(new) - L(old)| / max(1, |L(old)|) <= eps`` for the
    penalized objective ``L``, or after ``max_iter`` iterations.
    """
    cfg = config or PgdConfig()
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    sigma_x, sigma_y, p = check_covariances(sigma_x, sigma_y, m)
    group = m if cfg.mode == "ma" else 1
    t0 = time.perf_counter()

    eta = step_size(sigma_x, sigma_y)
    diff = sigma_x - sigma_y
    delta = np.zeros_like(sigma_x)
    obj = 0.0
    report = SolverReport(solver="pgd", mode=cfg.mode, step_size=eta)

    # skip the iterations when the starting point is already optimal; the
    # first prox step would otherwise hinge on rounding in eta * (Sx - Sy)
    i = 0
    if zero_is_optimal(sigma_x, sigma_y, lam, group):
        report.converged = True
    while i < cfg.max_iter and not report.converged:
        A = delta - eta * (sigma_x @ delta @ sigma_y - diff)
        new = kernels.group_soft_threshold(A, group, lam * eta)
        new_obj = penalized_loss(new, sigma_x, sigma_y, lam, group)
        change = abs(new_obj - obj) / max(1.0, abs(obj))
        report.primal_residuals.append(float(np.linalg.norm(new - delta)))
        report.dual_residuals.append(float(change))
        report.objective_trace.append(new_obj)
        delta, obj = new, new_obj
        i += 1
        if change <= cfg.eps:
            report.converged = True
            break

    report.iterations = i
    report.elapsed = time.perf_counter() - t0
    delta_sym = symmetrize(delta)
    return EstimateResult(
        delta=delta,
        delta_sym=delta_sym,
        edges=edges_from_delta(delta_sym, m),
        lam=float(lam),
        m=int(m),
        report=report,
    )
