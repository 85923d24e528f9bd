"""
Monotone Markov Models

Simulation and statistical stability diagnostics for monotone Markov
processes on the real line: kernels driven by reproducible counter-based
randomness, piecewise deterministic processes, concrete economic models and
convergence, mixing, ergodicity and tail certificates.
"""

from .__version__ import __version__, __author__, __email__

# Probability core
from .distributions import (
    AnalyticCdf,
    DominanceResult,
    EmpiricalDistribution,
    MonotoneObservable,
    TightnessInterval,
    bhattacharya_1d,
    build_empirical,
    dkw_band,
    dominates_sd,
    hoeffding_lower_bound,
    kolmogorov_distance,
    tightness_profile,
    write_cdf_report,
)
from .shock_laws import BetaLaw, ExponentialLaw, NormalLaw, PointLaw, UniformLaw, parse_shock_law

# Randomness and kernels
from .random_streams import CounterDraws, Draws, RandomnessStream, philox4x32
from .kernels import (
    ComposedKernel,
    FunctionKernel,
    IteratedKernel,
    MarkovKernel,
    compose_kernels,
    deterministic_kernel,
    identity_kernel,
    iterate,
    propagate,
    push_forward,
    write_path_csv,
)
from .couplings import (
    CoupledPaths,
    coupled_ensemble,
    coupled_paths,
    order_reversal_time,
    reversal_times,
    write_coupled_csv,
)

# Piecewise deterministic processes
from .pdmp import (
    FlagCheck,
    PdmpPath,
    PdmpSpec,
    check_monotone_flags,
    check_semi_flow,
    constant_drift_flow,
    embedded_kernel,
    extend_path,
    identity_flow,
    linear_drift_flow,
    ode_flow,
    pre_jump_kernel,
    simulate_path,
    time_sampler,
    write_dense_csv,
    write_skeleton_csv,
)

from .const import ClockSlot, ConvergenceStatus, CouplingMode, ExitCode, FigureId
from .errors import (
    ConfigurationError,
    EmptySampleError,
    InsufficientTailDataError,
    LogOddsDomainError,
    ModelError,
    MonotoneMarkovError,
    NonFiniteSampleError,
    NonFiniteStateError,
    OutOfHorizonError,
    UnsupportedConfigurationError,
)
from .settings import *

# Models and diagnostics
from . import diagnostics, models

__all__ = [
    # Version info
    "__version__",
    "__author__",
    "__email__",

    # Probability core
    "EmpiricalDistribution",
    "AnalyticCdf",
    "MonotoneObservable",
    "DominanceResult",
    "TightnessInterval",
    "build_empirical",
    "kolmogorov_distance",
    "bhattacharya_1d",
    "dominates_sd",
    "tightness_profile",
    "dkw_band",
    "hoeffding_lower_bound",
    "write_cdf_report",
    "PointLaw",
    "NormalLaw",
    "ExponentialLaw",
    "BetaLaw",
    "UniformLaw",
    "parse_shock_law",

    # Randomness and kernels
    "RandomnessStream",
    "Draws",
    "CounterDraws",
    "philox4x32",
    "MarkovKernel",
    "FunctionKernel",
    "ComposedKernel",
    "IteratedKernel",
    "compose_kernels",
    "deterministic_kernel",
    "identity_kernel",
    "iterate",
    "propagate",
    "push_forward",
    "write_path_csv",
    "CoupledPaths",
    "coupled_paths",
    "coupled_ensemble",
    "order_reversal_time",
    "reversal_times",
    "write_coupled_csv",

    # Piecewise deterministic processes
    "PdmpSpec",
    "PdmpPath",
    "FlagCheck",
    "simulate_path",
    "extend_path",
    "embedded_kernel",
    "pre_jump_kernel",
    "time_sampler",
    "identity_flow",
    "constant_drift_flow",
    "linear_drift_flow",
    "ode_flow",
    "check_semi_flow",
    "check_monotone_flags",
    "write_skeleton_csv",
    "write_dense_csv",

    # Enums
    "CouplingMode",
    "ClockSlot",
    "ConvergenceStatus",
    "ExitCode",
    "FigureId",

    # Errors
    "MonotoneMarkovError",
    "EmptySampleError",
    "NonFiniteSampleError",
    "NonFiniteStateError",
    "ConfigurationError",
    "OutOfHorizonError",
    "UnsupportedConfigurationError",
    "ModelError",
    "LogOddsDomainError",
    "InsufficientTailDataError",

    # Subpackages
    "models",
    "diagnostics",
]
