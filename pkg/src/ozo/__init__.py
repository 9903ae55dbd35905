"""Derivative-free descent along random orthogonal subspace directions.

The iteration estimates the gradient by forward differences along the ell
columns of a random scaled-orthonormal matrix and steps against the
back-projected estimate; ell = d with exact directional derivatives recovers
plain gradient descent. Problem generators ship with certified smoothness
and gradient-domination constants so every run can report where it sits
relative to the provable rates.
"""

from .diagnostics import (
    BoundReport,
    FitResult,
    error_region_bound,
    fit_rate,
    lemma1_check,
    quasi_descent_check,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    default_x0,
    emit_csv,
    load_config,
    resolve,
    run_experiment,
)
from .linalg import DegenerateMatrixError, fwht, is_power_of_two, qr_positive_diagonal, sym_eig
from .optimizer import DivergenceError, RunConfig, RunRecord, run, step_exact, step_fd
from .oracle import (
    DivergedEvaluationError,
    Objective,
    projected_gradient,
    surrogate_gradient,
)
from .problems import (
    PLViolationWarning,
    ProblemInstance,
    make_convex_pl,
    make_nonconvex_pl,
    pl_constant_nonconvex,
)
from .samplers import (
    SAMPLER_TAGS,
    Sampler,
    make_rng,
    sample_coordinate,
    sample_hadamard,
    sample_haar,
)
from .schedules import (
    AlphaSchedule,
    HSchedule,
    InfeasibleStepsizeError,
    RegimeConstants,
    ScheduleSpec,
    classify_regime,
    derive_constants,
    stopping_rule_pl,
)

__version__ = "0.1.0"
