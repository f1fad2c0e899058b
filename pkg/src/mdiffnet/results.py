"""Solver diagnostics and estimate containers shared by both solvers."""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SolverReport", "EstimateResult"]


@dataclass
class SolverReport:
    """Per-iteration diagnostics of one solve.

    For ADMM the residual lists hold the primal residual ``||Delta - W||_F``
    and dual residual ``rho * ||W_new - W_old||_F``, next to the tolerances
    they were compared against.  For proximal gradient descent
    ``primal_residuals`` holds the step norm ``||Delta_new - Delta_old||_F``
    and ``dual_residuals`` the guarded relative objective change that drives
    the stopping rule; the tolerance lists are then empty.
    """

    solver: str
    mode: str
    iterations: int = 0
    converged: bool = False
    primal_residuals: list = field(default_factory=list)
    dual_residuals: list = field(default_factory=list)
    primal_tolerances: list = field(default_factory=list)
    dual_tolerances: list = field(default_factory=list)
    objective_trace: list = field(default_factory=list)
    rho_trace: list = field(default_factory=list)
    final_rho: float | None = None
    step_size: float | None = None
    elapsed: float = 0.0

    def to_dict(self):
        return {
            "solver": self.solver,
            "mode": self.mode,
            "iterations": self.iterations,
            "converged": self.converged,
            "final_rho": self.final_rho,
            "step_size": self.step_size,
            "elapsed_seconds": self.elapsed,
            "primal_residuals": [float(v) for v in self.primal_residuals],
            "dual_residuals": [float(v) for v in self.dual_residuals],
            "primal_tolerances": [float(v) for v in self.primal_tolerances],
            "dual_tolerances": [float(v) for v in self.dual_tolerances],
            "objective_trace": [float(v) for v in self.objective_trace],
            "rho_trace": [float(v) for v in self.rho_trace],
        }


@dataclass
class EstimateResult:
    """Output of one penalized D-trace solve.

    ``delta`` is the raw minimizer (ADMM returns its thresholded split
    variable ``W``), generally not symmetric.  ``delta_sym`` is its symmetric
    part and ``edges`` the node pairs whose ``delta_sym`` block is nonzero.
    """

    delta: np.ndarray
    delta_sym: np.ndarray
    edges: frozenset
    lam: float
    m: int
    report: SolverReport

    @property
    def p(self):
        return self.delta.shape[0] // self.m

    @property
    def n_edges(self):
        return len(self.edges)
