"""Multistage min-sum set cover: relaxations, roundings and exact baselines."""

from .core import (
    CostReport,
    FractionalSequence,
    GranularMatrix,
    Instance,
    Permutation,
    StochasticMatrix,
    covering_cost,
    make_instance,
    matrix_from_permutation,
    permutation_from_matrix,
    total_cost,
    validate_instance,
)
from .distances import (
    decompose_neighboring,
    footrule_matrix,
    footrule_perm,
    fractional_kendall_tau,
    kendall_tau,
    r_index,
)
from .exact import (
    SetCoverInstance,
    SizeGuardError,
    brute_force_mtf,
    brute_force_opt,
    min_set_covers,
    setcover_reduce,
)
from .lp import SolverError, solve_first_position_lp, solve_fractional_mtf
from .rounding import (
    RoundingSeedState,
    greedy_lp_solve,
    greedy_round,
    move_to_front,
    randomized_round,
)

__all__ = [
    "CostReport",
    "FractionalSequence",
    "GranularMatrix",
    "Instance",
    "Permutation",
    "RoundingSeedState",
    "SetCoverInstance",
    "SizeGuardError",
    "SolverError",
    "StochasticMatrix",
    "brute_force_mtf",
    "brute_force_opt",
    "covering_cost",
    "decompose_neighboring",
    "footrule_matrix",
    "footrule_perm",
    "fractional_kendall_tau",
    "greedy_lp_solve",
    "greedy_round",
    "kendall_tau",
    "make_instance",
    "matrix_from_permutation",
    "min_set_covers",
    "move_to_front",
    "permutation_from_matrix",
    "r_index",
    "randomized_round",
    "setcover_reduce",
    "solve_first_position_lp",
    "solve_fractional_mtf",
    "total_cost",
    "validate_instance",
]
