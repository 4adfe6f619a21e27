"""Approximate Nash equilibria of bimatrix games with a 1/3 + delta
guarantee, via descent to a stationary point of the max-regret function
and an LP-dual strategy construction."""

from .construct import (
    Case4Params,
    Case5Params,
    Candidate,
    ConstructionTrace,
    case4_coefficients,
    construct_output,
    dispatch_case,
)
from .descent import (
    PrimalSolution,
    SolverConfig,
    StationaryCertificate,
    build_primal_lp,
    default_iterations,
    descent_step,
    equalize_regrets,
    run_descent,
)
from .duals import (
    ConstructParams,
    DualSolution,
    build_dual_lp,
    compute_lambda_mu,
    extract_duals,
    solve_dual,
)
from .errors import (
    AnashError,
    GuaranteeViolationError,
    InputError,
    InvariantViolationError,
    ParameterError,
    ParseError,
    SolverFailureError,
    StructuralError,
    UsageError,
)
from .game import (
    BimatrixGame,
    BestResponseSet,
    MixedStrategy,
    RegretReport,
    StrategyProfile,
    best_response_set,
    col_payoff,
    mix,
    normalize_game,
    regret_report,
    row_payoff,
)
from .gameio import load_game, load_profile, save_game, save_profile
from .instances import FAMILIES, InstanceSpec, generate
from .lp import BACKEND, LinearProgram, LpSolution, solve
from .oracle import ExactEquilibrium, certify, grid_min_regret, support_enumeration
from .pipeline import RunRecord, make_config, run_batch, run_solve

__version__ = "0.1.0"

__all__ = [
    "AnashError",
    "BACKEND",
    "BestResponseSet",
    "BimatrixGame",
    "Candidate",
    "Case4Params",
    "Case5Params",
    "ConstructParams",
    "ConstructionTrace",
    "DualSolution",
    "ExactEquilibrium",
    "FAMILIES",
    "GuaranteeViolationError",
    "InputError",
    "InstanceSpec",
    "InvariantViolationError",
    "LinearProgram",
    "LpSolution",
    "MixedStrategy",
    "ParameterError",
    "ParseError",
    "PrimalSolution",
    "RegretReport",
    "RunRecord",
    "SolverConfig",
    "SolverFailureError",
    "StationaryCertificate",
    "StrategyProfile",
    "StructuralError",
    "UsageError",
    "best_response_set",
    "build_dual_lp",
    "build_primal_lp",
    "case4_coefficients",
    "certify",
    "col_payoff",
    "compute_lambda_mu",
    "construct_output",
    "default_iterations",
    "descent_step",
    "dispatch_case",
    "equalize_regrets",
    "extract_duals",
    "generate",
    "grid_min_regret",
    "load_game",
    "load_profile",
    "make_config",
    "mix",
    "normalize_game",
    "regret_report",
    "row_payoff",
    "run_batch",
    "run_descent",
    "run_solve",
    "save_game",
    "save_profile",
    "solve",
    "solve_dual",
    "support_enumeration",
    "__version__",
]
