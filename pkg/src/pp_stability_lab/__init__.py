"""Stability analysis and simulation of stepped predator-prey models.

Two model families (Ricker-type and Lotka-Volterra) share five positive
parameters.  The package computes their equilibria, classifies stability of
the forward-Euler stepped maps against the continuous flows, derives the
closed-form step-size thresholds, simulates and diagnoses trajectories, and
sweeps stability regions over parameter grids.  A command-line front end
(``pp-stability-lab``) serializes everything to CSV/JSON.
"""

from .bounds import (
    BoundReport,
    CaseTag,
    classify_at_step,
    e1_bounds,
    e2_bounds,
    e3_case,
    e3_step_bound,
)
from .equilibrium import (
    BOUNDARY_TOL,
    EigenPair,
    Equilibrium,
    Matrix2,
    Stability,
    StabilityClass,
    classify_continuous,
    classify_discrete,
    eigenvalues_2x2,
    equilibria,
    jacobian_continuous,
    jacobian_discrete,
    roots_from_trace_det,
)
from .model import (
    EXP_ARG_MAX,
    DerivedQuantities,
    ModelKind,
    ModelParams,
    State,
    derived_quantities,
    discrete_step,
    growth_exponents,
    guarded_exp,
    ode_rhs,
)
from .regions import (
    BETA_FLOOR,
    DEFAULT_CELLS,
    Axis,
    BoundaryCurve,
    GridSpec,
    RegionLabel,
    RegionMap,
    boundary_curve,
    lower_boundary,
    sweep,
    upper_boundary,
)
from .sampling import (
    DEFAULT_SEED,
    SEED_ENV_VAR,
    env_seed,
    make_rng,
    random_kind,
    random_params,
    random_state,
    random_step,
)
from .simulate import (
    BURN_IN_FRACTION,
    CONVERGENCE_THRESHOLD,
    DIVERGENCE_GUARD,
    MIN_PEAK_RUN,
    MIN_SAMPLES,
    NEGATIVE_POPULATION,
    OVERFLOW_STOP,
    PEAK_RATIO_BAND,
    Diagnostics,
    Trajectory,
    Verdict,
    diagnose,
    integrate_reference,
    iterate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "ModelKind",
    "ModelParams",
    "State",
    "DerivedQuantities",
    "derived_quantities",
    "growth_exponents",
    "guarded_exp",
    "ode_rhs",
    "discrete_step",
    "EXP_ARG_MAX",
    # equilibrium
    "BOUNDARY_TOL",
    "Stability",
    "StabilityClass",
    "Matrix2",
    "EigenPair",
    "Equilibrium",
    "equilibria",
    "jacobian_continuous",
    "jacobian_discrete",
    "roots_from_trace_det",
    "eigenvalues_2x2",
    "classify_continuous",
    "classify_discrete",
    # bounds
    "CaseTag",
    "BoundReport",
    "e3_case",
    "e3_step_bound",
    "e2_bounds",
    "e1_bounds",
    "classify_at_step",
    # simulate
    "Verdict",
    "Trajectory",
    "Diagnostics",
    "iterate",
    "integrate_reference",
    "diagnose",
    "NEGATIVE_POPULATION",
    "OVERFLOW_STOP",
    "CONVERGENCE_THRESHOLD",
    "PEAK_RATIO_BAND",
    "BURN_IN_FRACTION",
    "MIN_PEAK_RUN",
    "DIVERGENCE_GUARD",
    "MIN_SAMPLES",
    # regions
    "Axis",
    "RegionLabel",
    "GridSpec",
    "BoundaryCurve",
    "RegionMap",
    "sweep",
    "boundary_curve",
    "upper_boundary",
    "lower_boundary",
    "BETA_FLOOR",
    "DEFAULT_CELLS",
    # sampling
    "SEED_ENV_VAR",
    "DEFAULT_SEED",
    "env_seed",
    "make_rng",
    "random_params",
    "random_state",
    "random_step",
    "random_kind",
]
