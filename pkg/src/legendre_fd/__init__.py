"""FD-method for the Legendre eigenvalue problem with a singular potential."""

from .errors import (
    ConfigurationError,
    ContractViolation,
    DomainError,
    FDStepError,
    LegendreFDError,
    PrecisionWarning,
)
from .fd import FDSolution, FDState, solve
from .potential import GAMMA, PotentialSpec, convergence_threshold, eval_q, weighted_l1_norm
from .quadrature import Mesh, build_mesh, cumulative_int, int_ab, int_az
from .special_functions import (
    build_delta_table,
    legendre_p,
    legendre_p_deriv,
    legendre_q,
    legendre_q_deriv,
)
from .theory import BoundReport, apriori_bounds

__all__ = [
    "BoundReport", "ConfigurationError", "ContractViolation", "DomainError",
    "FDSolution", "FDState", "FDStepError", "GAMMA", "LegendreFDError", "Mesh",
    "PotentialSpec", "PrecisionWarning", "apriori_bounds", "build_delta_table",
    "build_mesh", "convergence_threshold", "cumulative_int", "eval_q", "int_ab",
    "int_az", "legendre_p", "legendre_p_deriv", "legendre_q", "legendre_q_deriv",
    "solve", "weighted_l1_norm",
]
