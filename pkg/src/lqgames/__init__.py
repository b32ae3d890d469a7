"""Finite-horizon two-player LQ feedback Nash games under AR(1) execution
deviations: equilibrium solve, exact moment propagation, predictive
compensation, and paired Monte Carlo validation."""

from .benchmark import benchmark_game
from .compensator import CompensatorGains, apply_policy, optimal_gains, stage_objective
from .deviation import Ar1Params, DeviationPath, phi_cross, phi_marginal, sample_path
from .errors import (
    ConfigError,
    DimensionMismatch,
    IndefiniteWeight,
    InvalidParams,
    LqGamesError,
    SingularStageSystem,
    SweepCellError,
)
from .game import (
    DiagnosticsReport,
    GameSpec,
    NashSolution,
    Trajectory,
    check_assumptions,
    evaluate_cost,
    nominal_rollout,
    solve_feedback_nash,
)
from .harness import EnsembleStats, SweepRow, TrialResult, run_ensemble, run_trial, sweep
from .moments import (
    BoundCertificate,
    MomentSeries,
    ScalingRow,
    bound_certificate,
    propagate_moments,
    quadratic_scaling_table,
)
from .rng import derive_seed

__all__ = [
    "Ar1Params",
    "BoundCertificate",
    "CompensatorGains",
    "ConfigError",
    "DeviationPath",
    "DiagnosticsReport",
    "DimensionMismatch",
    "EnsembleStats",
    "GameSpec",
    "IndefiniteWeight",
    "InvalidParams",
    "LqGamesError",
    "MomentSeries",
    "NashSolution",
    "ScalingRow",
    "SingularStageSystem",
    "SweepCellError",
    "SweepRow",
    "Trajectory",
    "TrialResult",
    "apply_policy",
    "benchmark_game",
    "bound_certificate",
    "check_assumptions",
    "derive_seed",
    "evaluate_cost",
    "nominal_rollout",
    "optimal_gains",
    "phi_cross",
    "phi_marginal",
    "propagate_moments",
    "quadratic_scaling_table",
    "run_ensemble",
    "run_trial",
    "sample_path",
    "solve_feedback_nash",
    "stage_objective",
    "sweep",
]
