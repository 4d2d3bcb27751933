from .builders import (
    SolverError,
    build_first_position_lp,
    build_footrule_lp,
    build_fractional_mtf,
    solve_first_position_lp,
    solve_fractional_mtf,
)
from .model import EPS_LP, LinearProgram, LpBuilder, LpSolution, to_lp_format
from .simplex import simplex_solve

__all__ = [
    "EPS_LP",
    "LinearProgram",
    "LpBuilder",
    "LpSolution",
    "SolverError",
    "build_first_position_lp",
    "build_footrule_lp",
    "build_fractional_mtf",
    "simplex_solve",
    "solve_first_position_lp",
    "solve_fractional_mtf",
    "to_lp_format",
]
