"""Space curves: projection, lifting, and the two asymptote constructions."""

from .asymptotes import (
    AsymptoteParam,
    AsymptoteResult,
    BranchRecord,
    asymptote_branch,
    asymptote_from_space_branch,
    compute_asymptotes,
    eliminate_lambda,
    make_proper,
    space_asymptotes_basic,
    space_asymptotes_improved,
    substitute_parametrization,
)
from .convergence import ConvergenceReport, SamplePoint, embedding_root, sample_distance, verify_convergence
from .lambda_system import (
    LambdaSystem,
    check_triangular,
    determine_truncation_params,
    extend_branch,
    lambda_coefficients,
    residual_after_solving,
    solve_triangular,
)
from .lift import LiftFunction, Projection, SpaceBranch, lift_branch, lift_function, project, space_residuals

__all__ = [
    "AsymptoteParam",
    "AsymptoteResult",
    "BranchRecord",
    "ConvergenceReport",
    "SamplePoint",
    "LambdaSystem",
    "LiftFunction",
    "Projection",
    "SpaceBranch",
    "asymptote_branch",
    "asymptote_from_space_branch",
    "check_triangular",
    "compute_asymptotes",
    "determine_truncation_params",
    "eliminate_lambda",
    "embedding_root",
    "extend_branch",
    "lambda_coefficients",
    "lift_branch",
    "lift_function",
    "make_proper",
    "project",
    "residual_after_solving",
    "sample_distance",
    "solve_triangular",
    "space_asymptotes_basic",
    "space_asymptotes_improved",
    "space_residuals",
    "substitute_parametrization",
    "verify_convergence",
]
