"""Numerical engine for fractional evolution equations with two-sided
derivatives of order 1 < gamma < 2 and type 0 <= delta <= 1: closed-form
scalar solutions, spectral operator families for diagonal generators, a
weighted-space Picard solver for semilinear mild solutions, and numerical
certifiers for the underlying operator identities."""

from .fraccalc import (
    ExtrapolationError,
    FracOrder,
    Grid,
    GridTooCoarseError,
    SampledPath,
    WeightedPath,
    hilfer_derivative,
    hilfer_derivative_weighted,
    rl_integral,
    weighted_initial_values,
)
from .mild import (
    HypothesisData,
    IterationReport,
    PicardDivergenceError,
    SemilinearProblem,
    SolverConfig,
    contraction_margin,
    h5_radius,
    picard_limit_start,
    solve_mild,
    verify_mild_residual,
)
from .operators import (
    DiagonalGenerator,
    ModeCoeffs,
    check_functional_equation,
    check_resolvent_identity,
    cosine_apply,
    empirical_h1_constant,
    generator_limit_check,
    p_apply,
    sine_apply,
    solution_operator_apply,
)
from .report import VerifyReport
from .scalar import (
    ScalarLinearProblem,
    identity_3_3,
    solve_linear_scalar,
    verify_scalar_residual,
)
from .special import (
    GammaPoleError,
    MLAccuracyWarning,
    MLOracleError,
    MLParams,
    Z_SWITCH,
    gamma_fn,
    mittag_leffler,
    ml_oracle,
    reciprocal_gamma,
)
from .transforms import SineTransformPlan, sine_forward, sine_inverse

__version__ = "0.1.0"

__all__ = [
    "DiagonalGenerator",
    "ExtrapolationError",
    "FracOrder",
    "GammaPoleError",
    "Grid",
    "GridTooCoarseError",
    "HypothesisData",
    "IterationReport",
    "MLAccuracyWarning",
    "MLOracleError",
    "MLParams",
    "ModeCoeffs",
    "PicardDivergenceError",
    "SampledPath",
    "ScalarLinearProblem",
    "SemilinearProblem",
    "SineTransformPlan",
    "SolverConfig",
    "VerifyReport",
    "WeightedPath",
    "Z_SWITCH",
    "check_functional_equation",
    "check_resolvent_identity",
    "contraction_margin",
    "cosine_apply",
    "empirical_h1_constant",
    "gamma_fn",
    "generator_limit_check",
    "h5_radius",
    "hilfer_derivative",
    "hilfer_derivative_weighted",
    "identity_3_3",
    "mittag_leffler",
    "ml_oracle",
    "p_apply",
    "picard_limit_start",
    "reciprocal_gamma",
    "rl_integral",
    "sine_apply",
    "sine_forward",
    "sine_inverse",
    "solution_operator_apply",
    "solve_linear_scalar",
    "solve_mild",
    "verify_mild_residual",
    "verify_scalar_residual",
    "weighted_initial_values",
]
