"""Two-point zeroth-order gradient descent with a Monte Carlo concentration lab.

The library has three layers: objectives and estimators (synthetic strongly
convex instances, two-point gradient estimates), the optimizers with their
prescribed step-size schedules and closed-form theory constants, and a
harness plus concentration lab that empirically verify the high-probability
convergence guarantees at desk scale.
"""

from .concentration_lab import (
    LemmaReport,
    beta_raw_moment,
    chi_min_threshold,
    freedman_tail,
    laurent_massart_bound,
    max_bernstein_tail,
    suffix_sum_lower_bound,
    validate_beta_projection,
    validate_chi_min,
    validate_laurent_massart,
    validate_linear_martingale,
    validate_quadratic_term,
    validate_uniform_suffix,
)
from .estimators import (
    DirectionSample,
    GradEstimate,
    beta_residual,
    sample_direction,
    two_point_estimate,
    two_point_estimate_stochastic,
)
from .harness import (
    ExperimentConfig,
    TrialSummary,
    fit_loglog_slope,
    run_experiment,
    sweep,
    validate_lemma,
)
from .numerics import RngStream, Vector, derive_seed, dot, gaussian_vector, norm_sq
from .objectives import (
    Objective,
    StochasticObjective,
    make_finite_sum,
    make_quadratic,
    suboptimality,
)
from .optimizers import (
    Trajectory,
    ZoGdConfig,
    ZoSgdConfig,
    contraction_certificate,
    run_zo_gd,
    run_zo_sgd,
    step_size_gd,
    step_size_sgd,
)
from .theory import (
    GdTheory,
    SgdTheory,
    gd_alpha,
    gd_bound_rhs,
    gd_iterations,
    gd_theory,
    rho_weights,
    sgd_alpha,
    sgd_constants,
    sgd_query_complexity,
    sgd_warmup,
)

__version__ = "0.1.0"
