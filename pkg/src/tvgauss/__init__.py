"""Bayesian inversion in function spaces with a TV-Gaussian hybrid prior.

Core pieces: uniform-grid fields, a squared-exponential Gaussian reference
measure, TV/misfit potentials, two forward models (signal denoising and
heat-equation Robin-coefficient estimation), pCN / splitting-pCN / random-walk
samplers, MCMC diagnostics, and a reproducible experiment CLI.
"""

from .diagnostics import PosteriorSummary, acf, ess, iact, summarize
from .forward import (
    DenoisingModel,
    ForwardModel,
    HeatRobinModel,
    HeatRobinSetup,
    HeatSolverError,
    denoising_model,
    generate_data,
    heat_model,
)
from .gaussian import (
    CholeskyFactor,
    CovarianceOperator,
    SqExpKernel,
    build_covariance,
    cameron_martin_norm_sq,
    factor,
    gp_posterior_exact,
    sample_prior,
)
from .grid import (
    Field,
    Grid1D,
    ObservationSet,
    eval_at,
    make_grid,
    read_field_csv,
    read_observations_csv,
    regrid,
    write_field_csv,
    write_observations_csv,
)
from .potentials import TVTerm, data_misfit, omf, regularizer, tv_seminorm
from .samplers import (
    ChainAbortError,
    ChainOutput,
    ChainStats,
    PosteriorProblem,
    SamplerConfig,
    pcn_propose,
    pcn_step,
    rw_tv_step,
    run_chain,
    spcn_step,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "Grid1D",
    "ObservationSet",
    "make_grid",
    "eval_at",
    "regrid",
    "read_field_csv",
    "write_field_csv",
    "read_observations_csv",
    "write_observations_csv",
    "SqExpKernel",
    "CovarianceOperator",
    "CholeskyFactor",
    "build_covariance",
    "factor",
    "sample_prior",
    "cameron_martin_norm_sq",
    "gp_posterior_exact",
    "TVTerm",
    "tv_seminorm",
    "regularizer",
    "data_misfit",
    "omf",
    "ForwardModel",
    "DenoisingModel",
    "HeatRobinModel",
    "HeatRobinSetup",
    "HeatSolverError",
    "denoising_model",
    "heat_model",
    "generate_data",
    "SamplerConfig",
    "ChainStats",
    "ChainOutput",
    "ChainAbortError",
    "PosteriorProblem",
    "pcn_propose",
    "pcn_step",
    "spcn_step",
    "rw_tv_step",
    "run_chain",
    "PosteriorSummary",
    "acf",
    "iact",
    "ess",
    "summarize",
]
