"""One object per model: kernels, analytic references and sampling helpers behind a common surface."""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .. import settings
from ..const import CouplingMode
from ..distributions import AnalyticCdf, EmpiricalDistribution, build_empirical
from ..errors import ConfigurationError, UnsupportedConfigurationError
from ..kernels import IteratedKernel, MarkovKernel, iterate, propagate
from ..pdmp import PdmpPath, PdmpSpec, embedded_kernel, simulate_path, time_sampler
from ..random_streams import RandomnessStream
from . import belief, income, ou, wage
from .configs import (
    BeliefShockConfig,
    DriftIncomeConfig,
    WageLadderConfig,
    is_pareto_specialization,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReversalSetup:
    """Coupling and ordered starts x_hi > x_lo for an order-reversal experiment."""
    mode: CouplingMode
    x_hi: float
    x_lo: float
    bound: Optional[Callable[[np.ndarray], np.ndarray]] = None
    bound_label: str = ""


@dataclass(frozen=True, eq=False)
class SamplePath:
    """A dense view (times, values) plus the jump skeleton, with event labels when the model has them."""
    times: np.ndarray
    values: np.ndarray
    skeleton_times: np.ndarray
    skeleton_states: np.ndarray
    events: Optional[np.ndarray] = None
    pdmp_path: Optional[PdmpPath] = None


class StochasticModel(ABC):
    name: str = "model"
    continuous_time: bool = True
    display_label: str = "X_t"

    def __init__(self, config):
        self.config = config

    @abstractmethod
    def step_kernel(self) -> MarkovKernel:
        """One event (continuous time) or one period (discrete time)."""

    @abstractmethod
    def transition_kernel(self, dt: float) -> MarkovKernel:
        pass

    @abstractmethod
    def mixing_time(self) -> float:
        """Time after which a chain is treated as freshly restarted for long-run sampling."""

    def default_start(self) -> float:
        return 0.0

    def pdmp_spec(self) -> Optional[PdmpSpec]:
        return None

    def stationary_cdf(self) -> Optional[AnalyticCdf]:
        return None

    def tail_exponent(self) -> Optional[float]:
        return None

    def state_bounds(self) -> Optional[Tuple[float, float]]:
        return None

    def reversal_setup(self) -> Optional[ReversalSetup]:
        return None

    def mmc_constants(self):
        return None

    def reference_curve(self, phi0: EmpiricalDistribution, times: Sequence[float]) -> Optional[np.ndarray]:
        """Theoretical beta bound or exact beta(phi0 P_t, stationary) where the model knows one."""
        return None

    def display(self, x):
        return np.asarray(x, dtype=np.float64)

    @property
    def monotone(self) -> bool:
        return self.step_kernel().monotone_by_construction

    def _periods(self, dt: float) -> int:
        periods = int(round(dt))
        if periods < 0 or abs(periods - dt) > 1e-9:
            raise ConfigurationError(f"{self.name} runs in whole periods, got dt={dt}")
        return periods

    def advance(self, states: np.ndarray, dt: float, stream: RandomnessStream) -> np.ndarray:
        """Moves every state forward by dt; row i uses child stream i."""
        if dt < 0:
            raise ConfigurationError(f"dt must be >= 0, got {dt}")
        states = np.asarray(states, dtype=np.float64)
        if not self.continuous_time:
            return propagate(self.step_kernel(), states, self._periods(dt), stream)
        if dt == 0:
            return states.copy()
        return propagate(self.transition_kernel(dt), states, 1, stream)

    def long_run_sample(self, n: int, stream: RandomnessStream, burn_in: Optional[float] = None,
                        thin: Optional[float] = None, chains: Optional[int] = None) -> EmpiricalDistribution:
        """Surrogate stationary law from parallel chains sampled every ``thin`` after ``burn_in``."""
        if n < 1:
            raise ConfigurationError("long-run sample needs n >= 1")
        thin = self.mixing_time() if thin is None else thin
        burn_in = 4.0 * self.mixing_time() if burn_in is None else burn_in
        chains = min(n, chains or settings.MMM_LONG_RUN_CHAINS)
        rounds = math.ceil(n / chains)
        logger.info(f"{self.name}: long run of {chains} chains x {rounds} records, burn-in {burn_in}, thin {thin}")
        states = self.advance(np.full(chains, self.default_start()), burn_in, stream.child(0))
        records = []
        for j in range(rounds):
            states = self.advance(states, thin, stream.child(j + 1))
            records.append(states)
        return build_empirical(np.concatenate(records)[:n])

    def sample_path(self, x0: float, horizon: float, stream: RandomnessStream, grid_points: int = 1001) -> SamplePath:
        spec = self.pdmp_spec()
        if spec is not None:
            path = simulate_path(spec, x0, horizon, stream)
            grid = np.linspace(0.0, horizon, grid_points) if horizon > 0 else np.zeros(1)
            return SamplePath(times=grid, values=path.state_at(grid), skeleton_times=path.jump_times,
                              skeleton_states=path.states, events=self.event_labels(path), pdmp_path=path)
        if not self.continuous_time:
            values = iterate(self.step_kernel(), x0, self._periods(horizon), stream)
            steps = np.arange(values.size, dtype=np.float64)
            return SamplePath(times=steps, values=values, skeleton_times=steps, skeleton_states=values)
        if horizon < 0:
            raise ConfigurationError(f"horizon must be >= 0, got {horizon}")
        if horizon == 0:
            grid = np.zeros(1)
            values = np.array([x0], dtype=np.float64)
        else:
            grid = np.linspace(0.0, horizon, grid_points)
            values = iterate(self.transition_kernel(grid[1] - grid[0]), x0, grid.size - 1, stream)
        return SamplePath(times=grid, values=values, skeleton_times=np.zeros(1), skeleton_states=values[:1])

    def event_labels(self, path: PdmpPath) -> Optional[np.ndarray]:
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.config!r})"


class WageModel(StochasticModel):
    name = "wage"
    display_label = "w_t"

    def __init__(self, config: WageLadderConfig, destruction_kernel: Optional[MarkovKernel] = None,
                 offer_kernel: Optional[MarkovKernel] = None):
        super().__init__(config)
        self.destruction_kernel = destruction_kernel
        self.offer_kernel = offer_kernel

    def step_kernel(self):
        return wage.wage_event_kernel(self.config, self.destruction_kernel, self.offer_kernel)

    def transition_kernel(self, dt):
        return wage.wage_continuous_sampler(self.config, dt, self.destruction_kernel, self.offer_kernel)

    def mixing_time(self):
        return 5.0 / self.config.destruction_rate

    def pdmp_spec(self):
        if self.destruction_kernel is not None or self.offer_kernel is not None:
            return None
        return wage.wage_pdmp_spec(self.config)

    def state_bounds(self):
        return 0.0, self.config.wage_ceiling

    def mmc_constants(self) -> Optional[wage.WageMmcConstants]:
        return wage.wage_mmc_constants(self.config) if self.config.mmc is not None else None

    def reversal_setup(self):
        return ReversalSetup(CouplingMode.INDEPENDENT, self.config.wage_ceiling, 0.0)

    def reference_curve(self, phi0, times):
        constants = self.mmc_constants()
        return None if constants is None else constants.bound(times)

    def event_labels(self, path):
        if path.n_jumps == 0:
            return np.empty(0, dtype=object)
        return np.array(wage.EVENT_LABELS, dtype=object)[path.shocks[:, 0].astype(int)]


class BeliefModel(StochasticModel):
    name = "belief"
    continuous_time = False
    display_label = "pi_t"

    def __init__(self, config: BeliefShockConfig, reset_kernel: Optional[MarkovKernel] = None):
        super().__init__(config)
        self.reset_kernel = reset_kernel

    def step_kernel(self):
        return belief.belief_kernel(self.config, self.reset_kernel)

    def transition_kernel(self, dt):
        return IteratedKernel(self.step_kernel(), self._periods(dt))

    def mixing_time(self):
        rho = self.config.reset_probability
        if rho == 0:
            raise ConfigurationError("a belief chain without resets has no long-run law")
        return float(math.ceil(5.0 / rho))

    def reversal_setup(self):
        return ReversalSetup(CouplingMode.INDEPENDENT, 2.0, -2.0)

    def display(self, x):
        return belief.logodds_to_prob(x)


class _IncomeModel(StochasticModel):
    display_label = "Y_t"

    def __init__(self, config, reset_function=None):
        super().__init__(config)
        self.reset_function = reset_function

    @property
    def h(self):
        return self.reset_function or self.config.reset_function

    def step_kernel(self):
        return embedded_kernel(self.pdmp_spec())

    def transition_kernel(self, dt):
        return time_sampler(self.pdmp_spec(), dt)

    def default_start(self):
        lo, hi = self.h.bounds
        return 0.5 * (lo + hi) + self.config.reset_law.expected_value

    def display(self, x):
        return np.exp(np.asarray(x, dtype=np.float64))


class PureJumpIncomeModel(_IncomeModel):
    name = "income:pure-jump"

    def pdmp_spec(self):
        return income.pure_jump_spec(self.config, self.reset_function)

    def mixing_time(self):
        return 5.0 / self.config.reset_rate

    def stationary_cdf(self):
        if self.reset_function is None and is_pareto_specialization(self.config):
            return income.pure_jump_stationary_cdf(self.config)
        return None

    def tail_exponent(self):
        try:
            return income.pareto_tail_exponent(self.config)
        except UnsupportedConfigurationError:
            return None

    def reversal_setup(self):
        return ReversalSetup(CouplingMode.SHARED_CLOCK_INDEPENDENT_SHOCKS, 1.0, -1.0,
                             income.pure_jump_reversal_bound(self.config, self.reset_function), "(1-p*delta)^n")


class DriftIncomeModel(_IncomeModel):
    name = "income:drift"

    def __init__(self, config: DriftIncomeConfig, g: Optional[Callable[[float], float]] = None, reset_function=None):
        super().__init__(config, reset_function)
        self.g = g
        self._spec = income.drift_income_spec(config, g, reset_function)

    def pdmp_spec(self):
        return self._spec

    def mixing_time(self):
        return 5.0 / self.config.jump_rate

    def stationary_cdf(self):
        if self.g is not None or self.reset_function is not None:
            return None
        try:
            return income.drift_reset_stationary_cdf(self.config)
        except UnsupportedConfigurationError:
            return None

    def tail_exponent(self):
        if self.g is not None:
            return None
        try:
            return income.drift_tail_exponent(self.config)
        except UnsupportedConfigurationError:
            return None

    def reversal_setup(self):
        return ReversalSetup(CouplingMode.SHARED_CLOCK_INDEPENDENT_SHOCKS, 1.0, -1.0,
                             income.drift_reversal_bound(self.config, self.reset_function), "(1-delta)^k")


class OuModel(StochasticModel):
    name = "ou"

    def step_kernel(self):
        return ou.ou_exact_kernel(self.config, 1.0)

    def transition_kernel(self, dt):
        return ou.ou_exact_kernel(self.config, dt)

    def mixing_time(self):
        return 5.0 / self.config.theta

    def stationary_cdf(self):
        return ou.ou_stationary_cdf(self.config)

    def reversal_setup(self):
        return ReversalSetup(CouplingMode.INDEPENDENT, 2.0, -2.0)

    def reference_curve(self, phi0, times):
        if np.unique(phi0.points).size != 1:
            return None
        return ou.analytic_beta_curve(self.config, float(phi0.points[0]), times)


class ReflectionModel(StochasticModel):
    name = "flip"
    continuous_time = False

    def step_kernel(self):
        return ou.reflection_kernel(self.config)

    def transition_kernel(self, dt):
        return IteratedKernel(self.step_kernel(), self._periods(dt))

    def mixing_time(self):
        return 20.0

    def stationary_cdf(self):
        return AnalyticCdf.normal(0.0, self.config.noise_sd / math.sqrt(1.0 - self.config.slope ** 2))

    def reversal_setup(self):
        return ReversalSetup(CouplingMode.SHARED_NOISE, 2.0, -2.0)


def build_model(section: str, config, **injected) -> StochasticModel:
    """Model object for a config section name; ``injected`` carries optional Python kernels or functions."""
    if section == "wage":
        return WageModel(config, **injected)
    elif section == "belief":
        return BeliefModel(config, **injected)
    elif section == "pure_jump_income":
        return PureJumpIncomeModel(config, **injected)
    elif section == "drift_income":
        return DriftIncomeModel(config, **injected)
    elif section == "ou":
        return OuModel(config)
    elif section == "reflection":
        return ReflectionModel(config)
    else:
        raise ConfigurationError(f"Unknown model section: {section}")
