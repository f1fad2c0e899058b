"""Penalty selection: residual-plus-complexity BIC over a data-driven grid."""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateInputError
from .oracle import lambda_max
from .results import EstimateResult
from .solvers import run_many

__all__ = [
    "BicRow",
    "BicTable",
    "bic_score",
    "lambda_sm",
    "lambda_grid",
    "select_lambda",
    "SCALING",
]

MIN_LAMBDA = 1e-10

# two-sided diagonal rescaling, recorded in outputs for auditability
SCALING = "symmetric D^-1/2 (.) D^-1/2 with D = diag(sigma_x)"


@dataclass
class BicRow:
    lam: float
    bic: float
    nonzero: int
    result: EstimateResult


@dataclass
class BicTable:
    rows: list
    lambda_sm: float
    best_lambda: float
    grid_solves: int
    search_solves: int
    scaling: str = field(default=SCALING)

    @property
    def best(self):
        return next(r for r in self.rows if r.lam == self.best_lambda)

    def to_dict(self):
        return {
            "lambda_sm": self.lambda_sm,
            "best_lambda": self.best_lambda,
            "grid_solves": self.grid_solves,
            "search_solves": self.search_solves,
            "scaling": self.scaling,
            "rows": [
                {"lambda": r.lam, "bic": r.bic, "nonzero": r.nonzero,
                 "n_edges": r.result.n_edges, "converged": r.result.report.converged,
                 "iterations": r.result.report.iterations}
                for r in self.rows
            ],
        }


def bic_score(result, sigma_x, sigma_y, n_x, n_y):
    """``(n_x + n_y) ||Sx' D' Sy' - (Sx' - Sy')||_F + ln(n_x + n_y) |D|_0``.

    Primed quantities are rescaled by ``d = sqrt(diag(Sx))``:
    ``S' = S / (d d^T)`` and ``D' = D * (d d^T)``.  The nonzero count is
    taken on the unscaled, unsymmetrized estimate; scaling does not change
    it.  ``result`` may be an :class:`EstimateResult` or a plain array.
    """
    delta = result.delta if isinstance(result, EstimateResult) else np.asarray(result, dtype=float)
    sigma_x = np.asarray(sigma_x, dtype=float)
    sigma_y = np.asarray(sigma_y, dtype=float)
    if delta.shape != sigma_x.shape or sigma_y.shape != sigma_x.shape:
        raise ValueError("estimate and covariances must share one square shape")
    if n_x < 1 or n_y < 1:
        raise ValueError("sample sizes must be positive")
    diag = np.diag(sigma_x)
    if np.any(diag <= 0):
        raise DegenerateInputError("sigma_x has a nonpositive diagonal entry; BIC scaling undefined")
    d = np.sqrt(diag)
    outer = np.outer(d, d)
    sx = sigma_x / outer
    sy = sigma_y / outer
    dt = delta * outer
    resid = sx @ dt @ sy - (sx - sy)
    n_tot = n_x + n_y
    return float(n_tot * np.linalg.norm(resid) + math.log(n_tot) * np.count_nonzero(delta))


def lambda_sm(sigma_x, sigma_y, solver, rel_width=0.01, max_halvings=30):
    """Smallest penalty (to ``rel_width`` relative) giving an empty graph.

    Starts from the analytic bound ``lambda_max`` (always empty), halves
    until a nonempty graph appears, then bisects geometrically.  If no
    nonempty graph is found within ``max_halvings`` the lower search limit
    is returned (``MIN_LAMBDA`` when ``Sx == Sy``).  Returns ``(lambda_sm, n_solves)``.
    """
    hi = lambda_max(sigma_x, sigma_y, solver.m)
    floor = hi * 2.0 ** -max_halvings if hi > 0 else MIN_LAMBDA
    if hi <= 0:
        return floor, 0
    calls = 0
    lo = hi
    while True:
        lo = lo / 2.0
        calls += 1
        if solver(sigma_x, sigma_y, lo).edges:
            break
        hi = lo
        if lo <= floor:
            return lo, calls
    while hi / lo > 1.0 + rel_width:
        mid = math.sqrt(hi * lo)
        calls += 1
        if solver(sigma_x, sigma_y, mid).edges:
            lo = mid
        else:
            hi = mid
    return hi, calls


def lambda_grid(lam_sm, grid_size):
    """``grid_size`` log-spaced points on ``[lam_sm / 20, lam_sm / 2]``."""
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    return np.geomspace(lam_sm / 20.0, lam_sm / 2.0, grid_size)


def select_lambda(sigma_x, sigma_y, n_x, n_y, solver, grid_size=15, jobs=1):
    """Pick the grid penalty minimizing :func:`bic_score`.

    Ties go to the larger penalty.  Returns ``(best_lambda, BicTable)``.
    """
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    lam_sm, search_calls = lambda_sm(sigma_x, sigma_y, solver)
    grid = lambda_grid(lam_sm, grid_size)
    results = run_many(solver, sigma_x, sigma_y, grid, jobs=jobs)
    rows = [
        BicRow(lam=float(lam), bic=bic_score(res, sigma_x, sigma_y, n_x, n_y),
               nonzero=int(np.count_nonzero(res.delta)), result=res)
        for lam, res in zip(grid, results)
    ]
    best = rows[-1]
    for row in reversed(rows):
        if row.bic < best.bic:
            best = row
    table = BicTable(rows=rows, lambda_sm=float(lam_sm), best_lambda=best.lam,
                     grid_solves=len(rows), search_solves=search_calls)
    return best.lam, table
