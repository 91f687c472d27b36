"""Apparent homogenized energy densities of random nonlinear convex materials,
with antithetic-variable variance reduction."""

from .energy import EnergyParams, eval_W, eval_grad_W, eval_hess_W, eval_psi
from .randomfield import (
    CoefficientField,
    DistributionSpec,
    UniformDraws,
    antithetic,
    draw_uniforms,
    inverse_cdf,
    realize_field,
)
from .mesh_fem import PeriodicMesh, SolverError, build_mesh, solve_spd
from .newton import CorrectorState, NewtonConfig, initial_guess, solve_corrector, w1p_norm
from .homogenize import (
    HomogenizedOutputs,
    PipelineError,
    corrector_sensitivities,
    full_pipeline,
    homogenized_gradient,
    homogenized_hessian,
    homogenized_value,
)
from .oned import OneDProblem, oned_grad_wstar, oned_hess_wstar, oned_value_wstar
from .montecarlo import (
    QUANTITY_KEYS,
    ComparisonReport,
    EstimatorStats,
    RunSpec,
    compare,
    run_av,
    run_mc,
)
from .config import ConfigError, ExperimentConfig, parse_config
from .runner import run_experiment

__version__ = "0.1.0"
