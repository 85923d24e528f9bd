"""Log income processes: pure-jump raises with resets, and drift between resets.

Dynamics live in log space X; income is Y = exp(X).
"""

import logging
from typing import Callable, Optional

import numpy as np

from ..const import ClockSlot
from ..distributions import AnalyticCdf
from ..errors import ConfigurationError, UnsupportedConfigurationError
from ..pdmp import (
    PdmpSpec,
    check_semi_flow,
    constant_drift_flow,
    identity_flow,
    linear_drift_flow,
    ode_flow,
)
from ..shock_laws import ExponentialLaw, ShockLawBase
from .configs import (
    ConstantDrift,
    ConstantReset,
    DriftIncomeConfig,
    PureJumpIncomeConfig,
    is_pareto_specialization,
)

logger = logging.getLogger(__name__)


def pure_jump_spec(cfg: PureJumpIncomeConfig, reset_function=None) -> PdmpSpec:
    """Identity flow at rate lambda_1 + lambda_2; a jump resets with probability p, else raises.

    Shock columns: (reset indicator, raise eta, reset shock zeta). The
    indicator reads clock slot 1, eta marks slot 0 and zeta marks slot 1.
    """
    h = reset_function or cfg.reset_function
    p = cfg.p

    def shock_sampler(draws):
        reset = (draws.clock(ClockSlot.EVENT_TYPE) < p).astype(np.float64)
        return np.column_stack([reset, cfg.raise_law.sample(draws, 0), cfg.reset_law.sample(draws, 1)])

    def jump_map(x, shock):
        x = np.asarray(x, dtype=np.float64)
        return np.where(shock[:, 0] > 0.5, h(x) + shock[:, 2], x + shock[:, 1])

    return PdmpSpec(flow=identity_flow, jump_rate=cfg.total_rate, shock_sampler=shock_sampler, jump_map=jump_map,
                    name="income:pure-jump", shock_labels=("reset", "raise", "reset_shock"))


def _pareto_parts(cfg: PureJumpIncomeConfig):
    if not is_pareto_specialization(cfg):
        raise UnsupportedConfigurationError(
            "closed form needs a constant reset function, a point reset law and exponential raises"
        )
    x0 = cfg.reset_function.level + cfg.reset_law.expected_value
    return x0, cfg.p, cfg.q, cfg.raise_law.rate


def pure_jump_stationary_cdf(cfg: PureJumpIncomeConfig) -> AnalyticCdf:
    """Atom p at x0, then F(x) = 1 - q exp(-p theta (x - x0))."""
    x0, p, q, theta = _pareto_parts(cfg)
    rate = p * theta

    def evaluator(x):
        return np.where(x < x0, 0.0, 1.0 - q * np.exp(-rate * (x - x0)))

    def quantile(u):
        u = np.asarray(u, dtype=np.float64)
        tail = np.clip((1.0 - u) / q, np.finfo(float).tiny, None)
        return np.where(u <= p, x0, x0 - np.log(tail) / rate)

    return AnalyticCdf(evaluator=evaluator, support_lo=x0, atoms=((float(x0), float(p)),),
                       quantile_fn=quantile, name=f"pareto-stationary(x0={x0}, p={p:.4g}, theta={theta})")


def pareto_tail_exponent(cfg: PureJumpIncomeConfig) -> float:
    """alpha = lambda_2 theta / (lambda_1 + lambda_2) for Exp(theta) raises."""
    if not isinstance(cfg.raise_law, ExponentialLaw):
        raise UnsupportedConfigurationError("tail exponent needs exponential raises")
    return cfg.p * cfg.raise_law.rate


def pareto_income_survival(cfg: PureJumpIncomeConfig, y):
    """P{Y > y} = q (y / y0)^(-alpha) for y >= y0 = exp(x0)."""
    x0, p, q, theta = _pareto_parts(cfg)
    y = np.asarray(y, dtype=np.float64)
    y0 = np.exp(x0)
    return np.where(y < y0, 1.0, q * (y / y0) ** (-p * theta))


def drift_flow(cfg: DriftIncomeConfig, g: Optional[Callable[[float], float]] = None):
    """Closed form for constant and linear drift; a user drift g is integrated numerically and semi-flow tested."""
    if g is not None:
        flow = ode_flow(g)
        check_semi_flow(flow)
        return flow
    if isinstance(cfg.drift, ConstantDrift):
        return identity_flow if cfg.drift.mu == 0 else constant_drift_flow(cfg.drift.mu)
    return linear_drift_flow(cfg.drift.intercept, cfg.drift.slope)


def drift_income_spec(cfg: DriftIncomeConfig, g: Optional[Callable[[float], float]] = None,
                      reset_function=None) -> PdmpSpec:
    """Flow of x' = g(x) between jumps at rate lambda; jump map F(x, z) = h(x) + z with z on marks slot 0."""
    h = reset_function or cfg.reset_function

    def shock_sampler(draws):
        return cfg.reset_law.sample(draws, 0).reshape(-1, 1)

    def jump_map(x, shock):
        return h(np.asarray(x, dtype=np.float64)) + shock[:, 0]

    return PdmpSpec(flow=drift_flow(cfg, g), jump_rate=cfg.jump_rate, shock_sampler=shock_sampler,
                    jump_map=jump_map, name="income:drift", shock_labels=("reset_shock",))


def drift_reset_stationary_cdf(cfg: DriftIncomeConfig) -> AnalyticCdf:
    """x0 + Exp(lambda / mu): the state is x0 plus mu times the age since the last reset."""
    if not (isinstance(cfg.drift, ConstantDrift) and cfg.drift.mu > 0 and isinstance(cfg.reset_function, ConstantReset)
            and cfg.reset_law.is_point):
        raise UnsupportedConfigurationError(
            "closed form needs a positive constant drift, a constant reset function and a point reset law"
        )
    x0 = cfg.reset_function.level + cfg.reset_law.expected_value
    return AnalyticCdf.exponential(cfg.jump_rate / cfg.drift.mu, loc=x0)


def drift_tail_exponent(cfg: DriftIncomeConfig) -> float:
    """lambda / mu for a positive constant drift."""
    if not (isinstance(cfg.drift, ConstantDrift) and cfg.drift.mu > 0):
        raise UnsupportedConfigurationError("tail exponent needs a positive constant drift")
    return cfg.jump_rate / cfg.drift.mu


def reset_coupling_probability(reset_law: ShockLawBase, reset_function) -> float:
    """delta = P{zeta' - zeta >= sup h - inf h}: the chance one reset pair reverses any order."""
    lo, hi = reset_function.bounds
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ConfigurationError("reset function must be bounded")
    return reset_law.difference_exceedance(hi - lo)


def pure_jump_reversal_bound(cfg: PureJumpIncomeConfig, reset_function=None):
    """n -> (1 - p delta)^n over jump indices."""
    delta = reset_coupling_probability(cfg.reset_law, reset_function or cfg.reset_function)
    rate = cfg.p * delta
    return lambda n: (1.0 - rate) ** np.asarray(n, dtype=np.float64)


def drift_reversal_bound(cfg: DriftIncomeConfig, reset_function=None):
    """k -> (1 - delta)^k over shared jumps."""
    delta = reset_coupling_probability(cfg.reset_law, reset_function or cfg.reset_function)
    return lambda k: (1.0 - delta) ** np.asarray(k, dtype=np.float64)
