"""
Piecewise deterministic Markov processes.

A process is fixed by a semi-flow, a constant jump intensity, a shock law
and a jump map. Paths are simulated exactly, event by event: between jumps
the state follows the flow, at a jump the state is replaced by
``jump_map(flow(z, E), shock)``. Only the jump skeleton is stored; states
between jumps are recomputed on demand.

Randomness per jump: clock slot 0 carries the waiting time, the shock
sampler may use any other clock slot and every marks slot.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .const import SEMI_FLOW_TOLERANCE, ClockSlot
from .errors import ConfigurationError, NonFiniteStateError, OutOfHorizonError
from .kernels import BLOCK_STEPS, FunctionKernel, MarkovKernel
from .random_streams import Draws, RandomnessStream

logger = logging.getLogger(__name__)

Flow = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PdmpSpec:
    """The four characteristics of a PDMP.

    Args:
        flow: (states, elapsed) -> states, with flow(x, 0) = x.
        jump_rate: constant jump intensity.
        shock_sampler: draws -> array of shape (rows, shock_width).
        jump_map: (pre-jump states, shocks) -> post-jump states.
    """
    flow: Flow
    jump_rate: float
    shock_sampler: Callable[[Draws], np.ndarray]
    jump_map: Callable[[np.ndarray, np.ndarray], np.ndarray]
    flow_is_monotone: bool = True
    jump_is_monotone: bool = True
    name: str = "pdmp"
    shock_labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if not (np.isfinite(self.jump_rate) and self.jump_rate > 0):
            raise ConfigurationError(f"jump rate must be positive and finite, got {self.jump_rate}")

    @property
    def monotone(self) -> bool:
        return self.flow_is_monotone and self.jump_is_monotone

    def waiting_times(self, draws: Draws) -> np.ndarray:
        return -np.log1p(-draws.clock(ClockSlot.WAITING_TIME)) / self.jump_rate


@dataclass(frozen=True, eq=False)
class PdmpPath:
    spec: PdmpSpec
    jump_times: np.ndarray
    states: np.ndarray
    shocks: np.ndarray
    horizon: float
    stream: RandomnessStream = field(repr=False)

    @property
    def n_jumps(self) -> int:
        return int(self.jump_times.size - 1)

    @property
    def x0(self) -> float:
        return float(self.states[0])

    def state_at(self, t):
        """X_t = flow(Z_{N_t}, t - T_{N_t}); at a jump time the post-jump value (cadlag)."""
        times = np.asarray(t, dtype=np.float64)
        if np.any(times < 0) or np.any(times > self.horizon) or not np.all(np.isfinite(times)):
            raise OutOfHorizonError(f"t must lie in [0, {self.horizon}]")
        idx = np.searchsorted(self.jump_times, times, side="right") - 1
        values = self.spec.flow(self.states[idx].reshape(-1), (times - self.jump_times[idx]).reshape(-1))
        return values.reshape(times.shape) if times.ndim else float(values[0])

    def to_skeleton_csv(self, path: str):
        data = np.column_stack([self.jump_times, self.states])
        np.savetxt(path, data, delimiter=",", header="T_n,Z_n", comments="", fmt="%.17g")

    def to_dense_csv(self, grid, path: str):
        grid = np.asarray(grid, dtype=np.float64).reshape(-1)
        data = np.column_stack([grid, self.state_at(grid)])
        np.savetxt(path, data, delimiter=",", header="t,X_t", comments="", fmt="%.17g")


def _run_jumps(spec: PdmpSpec, times: List[float], states: List[float], shocks: List[np.ndarray],
               horizon: float, stream: RandomnessStream):
    """Appends every jump up to ``horizon``; jump n + 1 reads stream step counter + n."""
    n = len(times) - 1
    t = times[-1]
    z = np.array([states[-1]], dtype=np.float64)
    while True:
        block = stream.block(n, BLOCK_STEPS)
        waits = spec.waiting_times(block)
        for i in range(BLOCK_STEPS):
            wait = waits[i]
            t_next = t + wait
            if t_next > horizon:
                return
            row = block.row(i)
            shock = np.asarray(spec.shock_sampler(row), dtype=np.float64).reshape(1, -1)
            z = spec.jump_map(spec.flow(z, waits[i:i + 1]), shock)
            n += 1
            if not np.isfinite(z[0]):
                raise NonFiniteStateError(n, where="jump")
            times.append(t_next)
            states.append(float(z[0]))
            shocks.append(shock[0])
            t = t_next


def _make_path(spec, times, states, shocks, horizon, stream) -> PdmpPath:
    width = shocks[0].size if shocks else len(spec.shock_labels)
    shock_array = np.vstack(shocks) if shocks else np.empty((0, width))
    return PdmpPath(spec, np.asarray(times), np.asarray(states), shock_array, float(horizon), stream)


def simulate_path(spec: PdmpSpec, x0: float, horizon: float, stream: RandomnessStream) -> PdmpPath:
    """Exact event-driven path on [0, horizon].

    Raises:
        NonFiniteStateError: with the index of the offending jump.
    """
    if not np.isfinite(horizon) or horizon < 0:
        raise ConfigurationError(f"horizon must be finite and >= 0, got {horizon}")
    if not np.isfinite(x0):
        raise NonFiniteStateError(0, where="jump")
    times, states, shocks = [0.0], [float(x0)], []
    _run_jumps(spec, times, states, shocks, horizon, stream)
    logger.debug(f"simulate_path {spec.name}: {len(times) - 1} jumps on [0, {horizon}]")
    return _make_path(spec, times, states, shocks, horizon, stream)


def extend_path(path: PdmpPath, horizon: float) -> PdmpPath:
    """Continues ``path`` on the same stream; identical to simulating to ``horizon`` in one call."""
    if horizon < path.horizon:
        raise ConfigurationError(f"cannot shorten a path from {path.horizon} to {horizon}")
    times, states = list(path.jump_times), list(path.states)
    shocks = [row for row in path.shocks]
    _run_jumps(path.spec, times, states, shocks, horizon, path.stream)
    return _make_path(path.spec, times, states, shocks, horizon, path.stream)


def embedded_kernel(spec: PdmpSpec) -> MarkovKernel:
    """Z_{n+1} = F(flow(Z_n, E_{n+1}), shock_{n+1})."""

    def step(states, draws):
        waits = spec.waiting_times(draws)
        return spec.jump_map(spec.flow(states, waits), spec.shock_sampler(draws))

    return FunctionKernel(step, name=f"{spec.name}:embedded",
                          monotone_by_construction=spec.monotone, event_driven=True)


def pre_jump_kernel(spec: PdmpSpec) -> MarkovKernel:
    """Z -> flow(Z, E): the state just before the next jump."""

    def step(states, draws):
        return spec.flow(states, spec.waiting_times(draws))

    return FunctionKernel(step, name=f"{spec.name}:pre-jump",
                          monotone_by_construction=spec.flow_is_monotone, event_driven=True)


def time_sampler(spec: PdmpSpec, t: float) -> MarkovKernel:
    """Kernel sampling X_t given X_0 = state, by running the jumps in [0, t].

    Jump j of every row reads ``draws.child(j)``.
    """
    if t < 0:
        raise ConfigurationError(f"t must be >= 0, got {t}")

    def step(states, draws):
        x = np.array(states, dtype=np.float64, copy=True)
        if t == 0:
            return x
        elapsed = np.zeros_like(x)
        active = np.ones(x.shape, dtype=bool)
        j = 0
        while active.any():
            sub = draws.child(j)
            waits = spec.waiting_times(sub)
            jumps = active & (elapsed + waits <= t)
            finishing = active & ~jumps
            if finishing.any():
                x[finishing] = spec.flow(x[finishing], t - elapsed[finishing])
            if jumps.any():
                shock = np.asarray(spec.shock_sampler(sub), dtype=np.float64).reshape(x.size, -1)
                x[jumps] = spec.jump_map(spec.flow(x[jumps], waits[jumps]), shock[jumps])
                elapsed[jumps] += waits[jumps]
            active = jumps
            j += 1
        return x

    return FunctionKernel(step, name=f"{spec.name}:P_{t:g}",
                          monotone_by_construction=spec.monotone, event_driven=True)


def constant_drift_flow(mu: float) -> Flow:
    return lambda x, elapsed: x + mu * elapsed


def linear_drift_flow(intercept: float, slope: float) -> Flow:
    """Closed-form flow of x' = intercept + slope * x."""
    if slope == 0:
        return constant_drift_flow(intercept)

    def flow(x, elapsed):
        growth = np.exp(slope * elapsed)
        return x * growth + (intercept / slope) * np.expm1(slope * elapsed)

    return flow


def identity_flow(x, elapsed):
    return np.array(x, dtype=np.float64, copy=True)


def ode_flow(g: Callable[[float], float], rtol: float = 1e-10, atol: float = 1e-10) -> Flow:
    """Flow of x' = g(x) by adaptive Runge-Kutta (one solve per row)."""

    def flow(x, elapsed):
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        elapsed = np.broadcast_to(np.asarray(elapsed, dtype=np.float64), x.shape)
        out = x.copy()
        for i in np.flatnonzero(elapsed > 0):
            solution = solve_ivp(lambda s, y: [g(y[0])], (0.0, float(elapsed[i])), [x[i]],
                                 method="RK45", rtol=rtol, atol=atol)
            if not solution.success:
                raise ConfigurationError(f"ODE flow failed from x={x[i]}: {solution.message}")
            out[i] = solution.y[0, -1]
        return out

    return flow


def check_semi_flow(flow: Flow, stream: Optional[RandomnessStream] = None, trials: int = 64,
                    tolerance: float = SEMI_FLOW_TOLERANCE, scale: float = 2.0):
    """flow(x, 0) = x and flow(flow(x, s), t) = flow(x, s + t) on random triples.

    Raises:
        ConfigurationError: when either law fails beyond the relative tolerance.
    """
    stream = stream or RandomnessStream(master_seed=0)
    u = stream.block(0, trials)
    x = scale * (2.0 * u.marks(0) - 1.0)
    s = scale * u.marks(1)
    t = scale * u.marks(2)
    if not np.allclose(flow(x, np.zeros_like(x)), x, rtol=tolerance, atol=tolerance):
        raise ConfigurationError("flow(x, 0) differs from x")
    composed = flow(flow(x, s), t)
    direct = flow(x, s + t)
    error = np.abs(composed - direct) / np.maximum(1.0, np.abs(direct))
    if not np.all(error <= tolerance):
        worst = int(np.argmax(error))
        raise ConfigurationError(
            f"semi-flow law fails at x={x[worst]}, s={s[worst]}, t={t[worst]} (relative error {error[worst]:.3g})"
        )


@dataclass(frozen=True)
class FlagCheck:
    flow_ok: bool
    jump_ok: bool

    @property
    def ok(self) -> bool:
        return self.flow_ok and self.jump_ok


def check_monotone_flags(spec: PdmpSpec, stream: Optional[RandomnessStream] = None, pairs: int = 1000,
                         bounds: Tuple[float, float] = (-2.0, 2.0)) -> FlagCheck:
    """Tests the declared monotone flags on random ordered pairs inside ``bounds`` with shared randomness."""
    stream = stream or RandomnessStream(master_seed=0)
    block = stream.block(0, pairs)
    low, high = bounds
    # marks slots far above any shock sampler's
    lo = low + (high - low) * block.marks(1000)
    hi = lo + (high - lo) * block.marks(1001)
    elapsed = spec.waiting_times(block)
    shock = np.asarray(spec.shock_sampler(block), dtype=np.float64).reshape(pairs, -1)
    flow_ok = bool(np.all(spec.flow(lo, elapsed) <= spec.flow(hi, elapsed))) if spec.flow_is_monotone else True
    jump_ok = bool(np.all(spec.jump_map(lo, shock) <= spec.jump_map(hi, shock))) if spec.jump_is_monotone else True
    if not (flow_ok and jump_ok):
        logger.warning(f"{spec.name}: declared monotone flags not confirmed (flow={flow_ok}, jump={jump_ok})")
    return FlagCheck(flow_ok, jump_ok)


def write_skeleton_csv(path: PdmpPath, out: str):
    path.to_skeleton_csv(out)


def write_dense_csv(path: PdmpPath, grid, out: str):
    path.to_dense_csv(grid, out)
