"""Log-odds belief about a binary state under Gaussian signals and random resets.

The true state is fixed to the high mean. Each period a reset happens with
probability rho and the log-odds are redrawn from the reset kernel;
otherwise the log likelihood ratio of a fresh signal is added.
"""

import logging
from typing import Optional

import numpy as np
from scipy import special

from ..const import ClockSlot
from ..errors import LogOddsDomainError
from ..kernels import FunctionKernel, MarkovKernel
from .configs import BeliefShockConfig

logger = logging.getLogger(__name__)


def iid_reset_kernel(cfg: BeliefShockConfig) -> MarkovKernel:
    """Q(eta, .) = reset law, whatever eta; reads marks slot 0."""
    law = cfg.reset_law
    return FunctionKernel(lambda states, draws: law.sample(draws, 0), name=f"iid:{law.family}",
                          monotone_by_construction=True)


def belief_kernel(cfg: BeliefShockConfig, reset_kernel: Optional[MarkovKernel] = None) -> MarkovKernel:
    """eta' = I * R + (1 - I) * (eta + xi) with I ~ Bernoulli(rho) on clock slot 1.

    xi = (mu_h - mu_l)(Z - (mu_h + mu_l) / 2) / sigma^2 with Z ~ N(mu_h, sigma^2)
    on marks slot 0; the reset kernel reads child draws 0.
    """
    reset = reset_kernel or iid_reset_kernel(cfg)
    rho = cfg.reset_probability
    gap, midpoint, variance = cfg.signal_gap, cfg.signal_midpoint, cfg.signal_sd ** 2

    def step(states, draws):
        states = np.asarray(states, dtype=np.float64)
        resets = draws.clock(ClockSlot.EVENT_TYPE) < rho
        signal = cfg.mean_high + cfg.signal_sd * special.ndtri(draws.marks(0))
        learned = states + gap * (signal - midpoint) / variance
        return np.where(resets, reset.step(states, draws.child(0)), learned)

    return FunctionKernel(step, name="belief", monotone_by_construction=reset.monotone_by_construction,
                          event_driven=True)


def logodds_to_prob(eta):
    return special.expit(np.asarray(eta, dtype=np.float64))


def prob_to_logodds(pi):
    pi = np.asarray(pi, dtype=np.float64)
    if not np.all((pi > 0.0) & (pi < 1.0)):
        raise LogOddsDomainError("probabilities must lie in (0, 1)")
    return special.logit(pi)
