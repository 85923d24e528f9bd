"""Wage ladder with job destruction and on-the-job offers.

At rate delta the wage is redrawn from the destruction kernel Q_u; at rate
lambda an outside offer w' ~ Q_e(w, .) arrives and the worker keeps
max(w, w'). The wage lives on [0, w_bar].
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special, stats

from ..const import ClockSlot
from ..distributions import hoeffding_lower_bound
from ..errors import ConfigurationError, ModelError
from ..kernels import FunctionKernel, MarkovKernel, propagate
from ..pdmp import PdmpSpec, identity_flow
from ..random_streams import Draws, RandomnessStream
from .configs import AffineBeta, WageLadderConfig

logger = logging.getLogger(__name__)

EVENT_LABELS = ("destruction", "offer")


class AffineBetaKernel(MarkovKernel):
    """w -> offset + scale * w * B with B ~ Beta(a, b) read from marks slot 0."""
    monotone_by_construction = True

    def __init__(self, params: AffineBeta, name: str = "affine-beta"):
        self.params = params
        self.name = name

    def beta_draws(self, draws: Draws) -> np.ndarray:
        return special.betaincinv(self.params.a, self.params.b, draws.marks(0))

    def apply(self, states: np.ndarray, beta: np.ndarray) -> np.ndarray:
        return self.params.offset + self.params.scale * np.asarray(states, dtype=np.float64) * beta

    def step(self, states, draws):
        return self.apply(states, self.beta_draws(draws))

    def below_probability(self, w: float, level: float) -> float:
        """P{offset + scale * w * B <= level}."""
        spread = self.params.scale * w
        if spread == 0:
            return 1.0 if self.params.offset <= level else 0.0
        return float(special.betainc(self.params.a, self.params.b,
                                     np.clip((level - self.params.offset) / spread, 0.0, 1.0)))

    def above_probability(self, w: float, level: float) -> float:
        """P{offset + scale * w * B >= level}."""
        spread = self.params.scale * w
        if spread == 0:
            return 1.0 if self.params.offset >= level else 0.0
        return float(1.0 - special.betainc(self.params.a, self.params.b,
                                           np.clip((level - self.params.offset) / spread, 0.0, 1.0)))


def _check_range(values: np.ndarray, ceiling: float, where: str) -> np.ndarray:
    if np.any(values < 0.0) or np.any(values > ceiling):
        raise ModelError(f"{where} produced a wage outside [0, {ceiling}]")
    return values


def wage_event_kernel(cfg: WageLadderConfig, destruction_kernel: Optional[MarkovKernel] = None,
                      offer_kernel: Optional[MarkovKernel] = None) -> MarkovKernel:
    """One wage event: destruction with probability delta / (delta + lambda), else an offer kept by max.

    The event type reads clock slot 1; Q_u and Q_e read child draws 0 and 1.
    """
    q_u = destruction_kernel or AffineBetaKernel(cfg.destruction_kernel, "Q_u")
    q_e = offer_kernel or AffineBetaKernel(cfg.offer_kernel, "Q_e")
    p_destroy = cfg.destruction_probability
    ceiling = cfg.wage_ceiling

    def step(states, draws):
        destroyed = draws.clock(ClockSlot.EVENT_TYPE) < p_destroy
        after_destruction = _check_range(q_u.step(states, draws.child(0)), ceiling, q_u.name)
        offer = _check_range(q_e.step(states, draws.child(1)), ceiling, q_e.name)
        return np.where(destroyed, after_destruction, np.maximum(states, offer))

    return FunctionKernel(step, name="wage:event",
                          monotone_by_construction=q_u.monotone_by_construction and q_e.monotone_by_construction,
                          event_driven=True)


def wage_continuous_sampler(cfg: WageLadderConfig, t: float, destruction_kernel: Optional[MarkovKernel] = None,
                            offer_kernel: Optional[MarkovKernel] = None) -> MarkovKernel:
    """P_t as a Poisson mixture of event kernels: N ~ Poisson((delta + lambda) t) events.

    N is read from clock slot 0; event j reads child draws j.
    """
    if t < 0:
        raise ConfigurationError(f"t must be >= 0, got {t}")
    event = wage_event_kernel(cfg, destruction_kernel, offer_kernel)
    mean = cfg.total_rate * t

    def step(states, draws):
        x = np.array(states, dtype=np.float64, copy=True)
        if mean == 0:
            return x
        counts = stats.poisson.ppf(draws.clock(ClockSlot.WAITING_TIME), mean)
        for j in range(int(counts.max())):
            x = np.where(counts > j, event.step(x, draws.child(j)), x)
        return x

    return FunctionKernel(step, name=f"wage:P_{t:g}", monotone_by_construction=event.monotone_by_construction,
                          event_driven=True)


def wage_pdmp_spec(cfg: WageLadderConfig) -> PdmpSpec:
    """Identity flow, rate delta + lambda, shock = (event type, destruction Beta draw, offer Beta draw).

    Event type 0 is a destruction and 1 an offer, see ``EVENT_LABELS``.
    """
    q_u = AffineBetaKernel(cfg.destruction_kernel, "Q_u")
    q_e = AffineBetaKernel(cfg.offer_kernel, "Q_e")
    p_destroy = cfg.destruction_probability

    def shock_sampler(draws):
        offer = (draws.clock(ClockSlot.EVENT_TYPE) >= p_destroy).astype(np.float64)
        return np.column_stack([offer, q_u.beta_draws(draws.child(0)), q_e.beta_draws(draws.child(1))])

    def jump_map(x, shock):
        destroyed = shock[:, 0] < 0.5
        return np.where(destroyed, q_u.apply(x, shock[:, 1]), np.maximum(x, q_e.apply(x, shock[:, 2])))

    return PdmpSpec(flow=identity_flow, jump_rate=cfg.total_rate, shock_sampler=shock_sampler,
                    jump_map=jump_map, name="wage", shock_labels=("event", "destruction_beta", "offer_beta"))


@dataclass(frozen=True)
class WageMmcConstants:
    """Contraction constants: beta(phi P_t, phi*) <= C exp(-alpha t)."""
    kappa: float
    C: float
    alpha: float
    epsilon: float
    epsilon_method: str
    pivot: float
    steps: int

    def bound(self, t):
        return self.C * np.exp(-self.alpha * np.asarray(t, dtype=np.float64))


def _monte_carlo_epsilon(cfg: WageLadderConfig, stream: RandomnessStream, n_trials: int) -> float:
    """Hoeffding 99% lower bound on min(Q_u^n(w_bar, [0, pivot]), Q_e^n(0, [pivot, w_bar]))."""
    q_u = AffineBetaKernel(cfg.destruction_kernel, "Q_u")
    q_e = AffineBetaKernel(cfg.offer_kernel, "Q_e")
    pivot, n = cfg.mmc.pivot, cfg.mmc.steps
    down = propagate(q_u, np.full(n_trials, cfg.wage_ceiling), n, stream.child(0))
    up = propagate(q_e, np.zeros(n_trials), n, stream.child(1))
    p_down = float(np.mean(down <= pivot))
    p_up = float(np.mean(up >= pivot))
    logger.info(f"wage epsilon by simulation: P(down)={p_down:.4f}, P(up)={p_up:.4f} over {n_trials} trials")
    return min(hoeffding_lower_bound(p_down, n_trials), hoeffding_lower_bound(p_up, n_trials))


def wage_mmc_constants(cfg: WageLadderConfig, stream: Optional[RandomnessStream] = None,
                       n_trials: int = 10_000) -> WageMmcConstants:
    """kappa = exp(-(delta + lambda)) min(delta, lambda)^n / n! * epsilon, C = 2 / (1 - kappa), alpha = -ln(1 - kappa).

    epsilon comes from the config when given, in closed form for n = 1,
    and otherwise from a Hoeffding bound on a simulation.
    """
    if cfg.mmc is None:
        raise ConfigurationError("wage config carries no mmc section (pivot, steps)")
    pivot, n = cfg.mmc.pivot, cfg.mmc.steps
    if cfg.mmc.epsilon is not None:
        epsilon, method = cfg.mmc.epsilon, "given"
    elif n == 1:
        q_u = AffineBetaKernel(cfg.destruction_kernel, "Q_u")
        q_e = AffineBetaKernel(cfg.offer_kernel, "Q_e")
        epsilon = min(q_u.below_probability(cfg.wage_ceiling, pivot), q_e.above_probability(0.0, pivot))
        method = "analytic"
    else:
        epsilon = _monte_carlo_epsilon(cfg, stream or RandomnessStream(master_seed=0), n_trials)
        method = "monte-carlo"
    if not epsilon > 0:
        raise ConfigurationError(f"no mixing through pivot {pivot} in {n} steps: epsilon = {epsilon}")

    kappa = math.exp(-cfg.total_rate) * min(cfg.destruction_rate, cfg.offer_rate) ** n / math.factorial(n) * epsilon
    assert 0.0 < kappa < 1.0, f"kappa={kappa} outside (0, 1)"
    constants = WageMmcConstants(kappa=kappa, C=2.0 / (1.0 - kappa), alpha=math.log(1.0 / (1.0 - kappa)),
                                 epsilon=float(epsilon), epsilon_method=method, pivot=pivot, steps=n)
    logger.debug(f"wage MMC constants: {constants}")
    return constants
