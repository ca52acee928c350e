"""circleflow: spectral simulation of composition-driven Brownian circle flows."""

from .basis import (
    BasisPair,
    DerivedScaling,
    ScaledBasis,
    ScalingSequence,
    basis_coefficients,
    hlambda_norm,
    inclusion_hs_norm,
    inclusion_tail_bound,
    q_lambda_trace,
    verify_rapid_decay,
)
from .bell import (
    BellTable,
    HSBoundReport,
    LipschitzReport,
    bell_polynomial,
    compose_derivative,
    expansion_term_count,
    hs_bound_certificate,
    lipschitz_certificate,
    phi_apply,
    warp_expansion_terms,
)
from .circlefn import (
    AffineCircleMap,
    CircleFunction,
    compose,
    grid_points,
    sobolev_embedding_constant,
)
from .ensemble import (
    ConfigError,
    EnsembleSummary,
    RunConfig,
    contrast_h32,
    hitting_time_stats,
    run_ensemble,
    run_experiment,
    validation_checks,
)
from .flow import (
    FlowCheckReport,
    FlowState,
    PathRecord,
    PathSample,
    SimulationDiverged,
    SolverConfig,
    concatenate,
    diffeo_radius,
    euler_step,
    flow_compose_check,
    heun_step,
    simulate_path,
    stratonovich_correction,
    truncation_scale,
)
from .noise import ModeIncrement, NoiseStream, field_values, noise_field

__version__ = "0.1.0"
