"""Differential graph estimation for multi-attribute Gaussian data.

Estimates ``Delta = Omega_y - Omega_x`` directly from two sample
covariances with a group-lasso penalized D-trace loss.
"""

__version__ = "0.1.0"

from .admm import AdmmConfig
from .blockmat import edges_from_delta, symmetrize
from .covariance import MultiAttributeDataset, sample_covariance
from .exceptions import DegenerateInputError, DomainError, ParseError
from .pgd import PgdConfig
from .results import EstimateResult, SolverReport
from .solvers import Solver, make_solver

__all__ = [
    "AdmmConfig",
    "PgdConfig",
    "Solver",
    "make_solver",
    "EstimateResult",
    "SolverReport",
    "MultiAttributeDataset",
    "sample_covariance",
    "symmetrize",
    "edges_from_delta",
    "DegenerateInputError",
    "DomainError",
    "ParseError",
]
