"""Ornstein-Uhlenbeck process dX = -theta X dt + sigma dW, sampled exactly."""

import logging
from typing import Sequence

import numpy as np
from scipy import special

from ..distributions import AnalyticCdf, bhattacharya_1d
from ..errors import ConfigurationError
from ..kernels import FunctionKernel, MarkovKernel
from .configs import OuConfig, ReflectionConfig

logger = logging.getLogger(__name__)


def ou_exact_kernel(cfg: OuConfig, t: float) -> MarkovKernel:
    """x -> exp(-theta t) x + sigma_t Z with Z on marks slot 0."""
    if t < 0:
        raise ConfigurationError(f"t must be >= 0, got {t}")
    decay = float(np.exp(-cfg.theta * t))
    spread = float(cfg.sigma_t(t))

    def step(states, draws):
        x = decay * np.asarray(states, dtype=np.float64)
        if spread == 0:
            return x
        return x + spread * special.ndtri(draws.marks(0))

    return FunctionKernel(step, name=f"ou:P_{t:g}", monotone_by_construction=True)


def ou_exact_cdf(cfg: OuConfig, x0: float, t: float) -> AnalyticCdf:
    if t < 0:
        raise ConfigurationError(f"t must be >= 0, got {t}")
    return AnalyticCdf.normal(float(np.exp(-cfg.theta * t) * x0), float(cfg.sigma_t(t)))


def ou_stationary_cdf(cfg: OuConfig) -> AnalyticCdf:
    return AnalyticCdf.normal(0.0, cfg.sigma_bar)


def analytic_beta_curve(cfg: OuConfig, x0: float, times: Sequence[float]) -> np.ndarray:
    """beta(delta_x0 P_t, stationary law) at each t, from the two Gaussian CDFs."""
    target = ou_stationary_cdf(cfg)
    return np.array([bhattacharya_1d(ou_exact_cdf(cfg, x0, t), target) for t in times])


def reflection_kernel(cfg: ReflectionConfig) -> MarkovKernel:
    """x -> -slope x + noise_sd Z: decreasing in x, so declared non-monotone."""

    def step(states, draws):
        return -cfg.slope * np.asarray(states, dtype=np.float64) + cfg.noise_sd * special.ndtri(draws.marks(0))

    return FunctionKernel(step, name="flip", monotone_by_construction=False)
