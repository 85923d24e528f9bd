import logging
from abc import ABC, abstractmethod
from typing import Callable

import numpy as np

from .distributions import EmpiricalDistribution, build_empirical
from .errors import ConfigurationError, NonFiniteStateError
from .parallel import map_chunks
from .random_streams import CounterDraws, Draws, RandomnessStream, derive_ids

logger = logging.getLogger(__name__)

BLOCK_STEPS = 4096


class MarkovKernel(ABC):
    """A stochastic kernel given as a vectorized sampler.

    ``step`` maps an array of current states to next states, consuming one
    row of ``draws`` per state. ``monotone_by_construction`` promises that for
    every fixed realization of the draws the map is nondecreasing in the
    state; ``event_driven`` kernels split their randomness into event clock
    and event marks, which the shared-clock coupling relies on.
    """
    name: str = "kernel"
    monotone_by_construction: bool = False
    event_driven: bool = False

    @abstractmethod
    def step(self, states: np.ndarray, draws: Draws) -> np.ndarray:
        pass

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(name={self.name!r}, "
                f"monotone={self.monotone_by_construction}, event_driven={self.event_driven})")


class FunctionKernel(MarkovKernel):
    def __init__(self, step_fn: Callable[[np.ndarray, Draws], np.ndarray], name: str,
                 monotone_by_construction: bool = False, event_driven: bool = False):
        self.step_fn = step_fn
        self.name = name
        self.monotone_by_construction = monotone_by_construction
        self.event_driven = event_driven

    def step(self, states, draws):
        return self.step_fn(states, draws)


class ComposedKernel(MarkovKernel):
    """``first`` then ``second``; the two halves read child draws 0 and 1."""

    def __init__(self, first: MarkovKernel, second: MarkovKernel):
        self.first = first
        self.second = second
        self.name = f"{second.name}*{first.name}"
        self.monotone_by_construction = first.monotone_by_construction and second.monotone_by_construction
        self.event_driven = first.event_driven and second.event_driven

    def step(self, states, draws):
        return self.second.step(self.first.step(states, draws.child(0)), draws.child(1))


class IteratedKernel(MarkovKernel):
    """``kernel`` applied ``times`` times in one step; application j reads child draws j."""

    def __init__(self, kernel: MarkovKernel, times: int):
        if times < 0:
            raise ConfigurationError(f"times must be >= 0, got {times}")
        self.kernel = kernel
        self.times = times
        self.name = f"{kernel.name}^{times}"
        self.monotone_by_construction = kernel.monotone_by_construction
        self.event_driven = kernel.event_driven

    def step(self, states, draws):
        x = np.array(states, dtype=np.float64, copy=True)
        for j in range(self.times):
            x = self.kernel.step(x, draws.child(j))
        return x


def deterministic_kernel(fn: Callable[[np.ndarray], np.ndarray], name: str = "deterministic",
                         monotone_by_construction: bool = False) -> FunctionKernel:
    return FunctionKernel(lambda states, draws: fn(states), name=name,
                          monotone_by_construction=monotone_by_construction)


def identity_kernel() -> FunctionKernel:
    return FunctionKernel(lambda states, draws: np.array(states, dtype=np.float64, copy=True),
                          name="identity", monotone_by_construction=True, event_driven=True)


def compose_kernels(first: MarkovKernel, second: MarkovKernel) -> ComposedKernel:
    return ComposedKernel(first, second)


def iterate(kernel: MarkovKernel, x0: float, steps: int, stream: RandomnessStream) -> np.ndarray:
    """Runs one path (x0, x1, ..., x_steps); step k reads stream step counter + k - 1.

    Raises:
        NonFiniteStateError: carrying the index of the first non-finite state.
    """
    if steps < 0:
        raise ConfigurationError(f"steps must be >= 0, got {steps}")
    path = np.empty(steps + 1, dtype=np.float64)
    path[0] = x0
    if not np.isfinite(path[0]):
        raise NonFiniteStateError(0)
    state = path[:1].copy()
    for first in range(0, steps, BLOCK_STEPS):
        count = min(BLOCK_STEPS, steps - first)
        block = stream.block(first, count)
        for i in range(count):
            state = kernel.step(state, block.row(i))
            k = first + i + 1
            if not np.isfinite(state[0]):
                raise NonFiniteStateError(k)
            path[k] = state[0]
    return path


def run_rows(kernel: MarkovKernel, states: np.ndarray, steps: int, master_seed: int,
             clock_ids: np.ndarray, marks_ids: np.ndarray) -> np.ndarray:
    """Advances rows with explicit channel ids; step k reads counter k."""
    x = np.asarray(states, dtype=np.float64).copy()
    for k in range(steps):
        x = kernel.step(x, CounterDraws(master_seed, clock_ids, marks_ids, np.uint64(k)))
        if not np.all(np.isfinite(x)):
            raise NonFiniteStateError(k + 1)
    return x


def propagate(kernel: MarkovKernel, states: np.ndarray, steps: int, stream: RandomnessStream) -> np.ndarray:
    """Array form of push_forward: row i follows child stream i of ``stream``.

    Row i ends exactly where ``iterate(kernel, states[i], steps, stream.child(i))`` ends.
    """
    if steps < 0:
        raise ConfigurationError(f"steps must be >= 0, got {steps}")
    states = np.asarray(states, dtype=np.float64).reshape(-1)
    if steps == 0:
        return states.copy()

    def work(start: int, stop: int) -> np.ndarray:
        ids = derive_ids(stream.master_seed, np.uint64(stream.stream_id), np.arange(start, stop, dtype=np.uint64))
        return run_rows(kernel, states[start:stop], steps, stream.master_seed, ids, ids)

    logger.debug(f"propagate {kernel.name}: {states.size} rows, {steps} steps")
    return map_chunks(work, states.size)


def push_forward(kernel: MarkovKernel, phi: EmpiricalDistribution, t: int,
                 stream: RandomnessStream) -> EmpiricalDistribution:
    """Monte Carlo phi P^t: each sample point moved by its own stream, weights carried along."""
    if t == 0:
        return phi
    moved = propagate(kernel, phi.points, t, stream)
    return build_empirical(moved, None if phi.is_uniform else phi.weights)


def write_path_csv(path_states: np.ndarray, path: str):
    states = np.asarray(path_states, dtype=np.float64)
    data = np.column_stack([np.arange(states.size), states])
    np.savetxt(path, data, delimiter=",", header="step,state", comments="", fmt=["%d", "%.17g"])
