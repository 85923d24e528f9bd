"""Statistical certificates: convergence curves, mixing, ergodic averages, tails and tightness."""

from .convergence import (
    ContractivityCurve,
    ConvergencePoint,
    ConvergenceReport,
    asymptotic_contractivity_curve,
    convergence_curve,
    fit_rate,
)
from .ergodic import ErgodicAverage, ergodic_average, ergodic_run
from .mixing import (
    CouplingCheck,
    MixingReport,
    MmcEstimate,
    SurvivalPoint,
    check_monotone_coupling,
    mmc_monte_carlo,
    model_coupling_check,
    model_reversal_survival,
    order_reversal_survival,
)
from .tails import TailEstimate, hill_tail_exponent, pareto_samples
from .tightness import TightnessCheck, tightness_check, trajectory_family

__all__ = [
    # Convergence
    "ConvergencePoint",
    "ConvergenceReport",
    "ContractivityCurve",
    "convergence_curve",
    "asymptotic_contractivity_curve",
    "fit_rate",

    # Mixing
    "MmcEstimate",
    "MixingReport",
    "SurvivalPoint",
    "CouplingCheck",
    "mmc_monte_carlo",
    "order_reversal_survival",
    "model_reversal_survival",
    "check_monotone_coupling",
    "model_coupling_check",

    # Ergodicity
    "ErgodicAverage",
    "ergodic_average",
    "ergodic_run",

    # Tails
    "TailEstimate",
    "hill_tail_exponent",
    "pareto_samples",

    # Tightness
    "TightnessCheck",
    "tightness_check",
    "trajectory_family",
]
