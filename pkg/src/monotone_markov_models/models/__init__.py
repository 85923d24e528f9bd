"""Concrete monotone models, their configurations and named presets."""

from .base import (
    BeliefModel,
    DriftIncomeModel,
    OuModel,
    PureJumpIncomeModel,
    ReflectionModel,
    ReversalSetup,
    SamplePath,
    StochasticModel,
    WageModel,
    build_model,
)
from .belief import belief_kernel, logodds_to_prob, prob_to_logodds
from .configs import (
    AffineBeta,
    BeliefShockConfig,
    BoundedReset,
    ClippedLinearReset,
    ConstantDrift,
    ConstantReset,
    DriftIncomeConfig,
    LinearDrift,
    MmcData,
    ModelFile,
    OuConfig,
    PureJumpIncomeConfig,
    ReflectionConfig,
    WageLadderConfig,
    bounded_reset,
)
from .income import (
    drift_income_spec,
    drift_reset_stationary_cdf,
    pareto_income_survival,
    pareto_tail_exponent,
    pure_jump_spec,
    pure_jump_stationary_cdf,
    reset_coupling_probability,
)
from .ou import analytic_beta_curve, ou_exact_cdf, ou_exact_kernel, ou_stationary_cdf, reflection_kernel
from .presets import available_presets, load_model_file, load_preset, model_from_file, preset_file
from .wage import (
    AffineBetaKernel,
    WageMmcConstants,
    wage_continuous_sampler,
    wage_event_kernel,
    wage_mmc_constants,
    wage_pdmp_spec,
)

__all__ = [
    # Model objects
    "StochasticModel",
    "WageModel",
    "BeliefModel",
    "PureJumpIncomeModel",
    "DriftIncomeModel",
    "OuModel",
    "ReflectionModel",
    "ReversalSetup",
    "SamplePath",
    "build_model",

    # Configurations
    "ModelFile",
    "WageLadderConfig",
    "AffineBeta",
    "MmcData",
    "BeliefShockConfig",
    "PureJumpIncomeConfig",
    "DriftIncomeConfig",
    "ConstantDrift",
    "LinearDrift",
    "ConstantReset",
    "ClippedLinearReset",
    "BoundedReset",
    "bounded_reset",
    "OuConfig",
    "ReflectionConfig",

    # Wage
    "AffineBetaKernel",
    "WageMmcConstants",
    "wage_event_kernel",
    "wage_continuous_sampler",
    "wage_pdmp_spec",
    "wage_mmc_constants",

    # Belief
    "belief_kernel",
    "logodds_to_prob",
    "prob_to_logodds",

    # Income
    "pure_jump_spec",
    "pure_jump_stationary_cdf",
    "pareto_tail_exponent",
    "pareto_income_survival",
    "drift_income_spec",
    "drift_reset_stationary_cdf",
    "reset_coupling_probability",

    # Ornstein-Uhlenbeck
    "ou_exact_kernel",
    "ou_exact_cdf",
    "ou_stationary_cdf",
    "analytic_beta_curve",
    "reflection_kernel",

    # Presets
    "available_presets",
    "preset_file",
    "load_preset",
    "load_model_file",
    "model_from_file",
]
