"""Conditional stability of inverse initial-data problems for semigroup flows.

The library builds desk-scale generators of analytic semigroups (a Dirichlet
heat operator and Ornstein-Uhlenbeck operators in Gaussian-weighted spaces),
computes the harmonic interpolation weight on the analyticity strip through a
conformal boundary map, and verifies the resulting logarithmic-convexity and
log-kernel stability bounds on sampled ensembles, with CSV/JSON/figure
reports behind a CLI.
"""

from .conformal import (
    StripGeometry,
    angle_constants,
    boundary_map_h,
    w_lower_bound,
    w_real,
)
from .errors import (
    BasisOverflowError,
    DegenerateObservationError,
    NoConvergenceError,
    SingularGramianError,
    UnstableDriftError,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    ObservabilityEstimate,
    ObservationRegion,
    estimate_observability,
    load_config,
    region_satisfies_cover,
    run_experiment,
    sample_admissible,
)
from .operators import (
    DiscreteGenerator,
    DriftSpec,
    Gramian,
    HermiteBasis,
    SineBasis,
    analyticity_angle,
    build_heat_generator,
    build_ou_generator,
    fractional_norm,
    lyapunov_gramian,
    sector_constants,
    semigroup_apply,
    smoothing_constant,
)
from .semigroup import (
    TEST_FUNCTIONS,
    OUModel,
    finite_time_gramian,
    gramian_t,
    invariant_density,
    kolmogorov_apply,
    weighted_sobolev_norm,
)
from .specfun import (
    BetaArgs,
    GammaArgs,
    beta_inc,
    beta_lower_residual,
    gamma_lower_ratio,
    gamma_upper,
)
from .stability import (
    StabilityBound,
    StabilityParams,
    gamma_kernel,
    logconvexity_bound,
    r_monotone_residuals,
    stability_rhs,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # specfun
    "GammaArgs",
    "BetaArgs",
    "gamma_upper",
    "gamma_lower_ratio",
    "beta_inc",
    "beta_lower_residual",
    # conformal
    "StripGeometry",
    "angle_constants",
    "boundary_map_h",
    "w_real",
    "w_lower_bound",
    # operators
    "DriftSpec",
    "Gramian",
    "DiscreteGenerator",
    "SineBasis",
    "HermiteBasis",
    "lyapunov_gramian",
    "analyticity_angle",
    "build_heat_generator",
    "build_ou_generator",
    "sector_constants",
    "semigroup_apply",
    "fractional_norm",
    "smoothing_constant",
    # semigroup
    "OUModel",
    "gramian_t",
    "finite_time_gramian",
    "kolmogorov_apply",
    "invariant_density",
    "weighted_sobolev_norm",
    "TEST_FUNCTIONS",
    # stability
    "StabilityParams",
    "StabilityBound",
    "validate_params",
    "logconvexity_bound",
    "gamma_kernel",
    "stability_rhs",
    "r_monotone_residuals",
    # harness
    "ObservationRegion",
    "ObservabilityEstimate",
    "ExperimentConfig",
    "ExperimentReport",
    "region_satisfies_cover",
    "estimate_observability",
    "sample_admissible",
    "run_experiment",
    "load_config",
    # errors
    "NoConvergenceError",
    "UnstableDriftError",
    "SingularGramianError",
    "DegenerateObservationError",
    "BasisOverflowError",
]
