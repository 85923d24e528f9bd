import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .const import CouplingMode
from .errors import ConfigurationError, NonFiniteStateError
from .kernels import BLOCK_STEPS, MarkovKernel
from .parallel import map_chunks
from .random_streams import CounterDraws, RandomnessStream, derive_ids

logger = logging.getLogger(__name__)


def check_mode(first: MarkovKernel, second: MarkovKernel, mode: CouplingMode):
    if mode == CouplingMode.SHARED_CLOCK_INDEPENDENT_SHOCKS and not (first.event_driven and second.event_driven):
        raise ConfigurationError(
            f"{mode.value} coupling needs event-driven kernels, got {first.name} and {second.name}"
        )


def channel_ids(master_seed: int, base_ids: np.ndarray, mode: CouplingMode) -> Tuple[np.ndarray, ...]:
    """(clock, marks) ids of the first chain followed by those of the second.

    The first chain reads child 0 of each base id on both channels in every
    mode; the mode only decides what the second chain shares with it.
    """
    a = derive_ids(master_seed, base_ids, 0)
    if mode == CouplingMode.SHARED_NOISE:
        return a, a, a, a
    b = derive_ids(master_seed, base_ids, 1)
    if mode == CouplingMode.INDEPENDENT:
        return a, a, b, b
    elif mode == CouplingMode.SHARED_CLOCK_INDEPENDENT_SHOCKS:
        return a, a, a, b
    else:
        raise ConfigurationError(f"Unknown coupling mode: {mode}")


@dataclass(frozen=True, eq=False)
class CoupledPaths:
    first: np.ndarray
    second: np.ndarray
    mode: CouplingMode

    @property
    def steps(self) -> int:
        return self.first.shape[0] - 1

    def ordered(self) -> bool:
        return bool(np.all(self.first <= self.second))

    def to_csv(self, path: str):
        data = np.column_stack([np.arange(self.first.shape[0]), self.first, self.second])
        np.savetxt(path, data, delimiter=",", header="step,state_a,state_b", comments="",
                   fmt=["%d", "%.17g", "%.17g"])


def coupled_paths(first: MarkovKernel, second: MarkovKernel, x0: float, x0_second: float,
                  mode: CouplingMode, steps: int, stream: RandomnessStream) -> CoupledPaths:
    """Two paths driven by the noise wiring of ``mode``.

    Equals replication r of :func:`coupled_ensemble` when called with ``stream.child(r)``.
    """
    check_mode(first, second, mode)
    if steps < 0:
        raise ConfigurationError(f"steps must be >= 0, got {steps}")
    a_clock, a_marks, b_clock, b_marks = channel_ids(stream.master_seed, np.uint64(stream.stream_id), mode)
    path_a = np.empty(steps + 1)
    path_b = np.empty(steps + 1)
    path_a[0], path_b[0] = x0, x0_second
    state_a, state_b = path_a[:1].copy(), path_b[:1].copy()
    for start in range(0, steps, BLOCK_STEPS):
        count = min(BLOCK_STEPS, steps - start)
        counters = np.arange(stream.counter + start, stream.counter + start + count, dtype=np.uint64)
        block_a = CounterDraws(stream.master_seed, a_clock, a_marks, counters)
        block_b = CounterDraws(stream.master_seed, b_clock, b_marks, counters)
        for i in range(count):
            state_a = first.step(state_a, block_a.row(i))
            state_b = second.step(state_b, block_b.row(i))
            k = start + i + 1
            if not (np.isfinite(state_a[0]) and np.isfinite(state_b[0])):
                raise NonFiniteStateError(k)
            path_a[k], path_b[k] = state_a[0], state_b[0]
    return CoupledPaths(path_a, path_b, mode)


def coupled_ensemble(first: MarkovKernel, second: MarkovKernel, starts, starts_second,
                     mode: CouplingMode, steps: int, stream: RandomnessStream,
                     replications: Optional[int] = None) -> CoupledPaths:
    """Vectorized replications of :func:`coupled_paths`; arrays have shape (steps + 1, replications)."""
    check_mode(first, second, mode)
    starts = np.asarray(starts, dtype=np.float64)
    starts_second = np.asarray(starts_second, dtype=np.float64)
    if replications is None:
        replications = int(np.broadcast(starts, starts_second).size)
    starts = np.broadcast_to(starts, (replications,))
    starts_second = np.broadcast_to(starts_second, (replications,))

    def work(lo: int, hi: int) -> np.ndarray:
        base = derive_ids(stream.master_seed, np.uint64(stream.stream_id), np.arange(lo, hi, dtype=np.uint64))
        a_clock, a_marks, b_clock, b_marks = channel_ids(stream.master_seed, base, mode)
        out = np.empty((hi - lo, steps + 1, 2))
        x_a, x_b = starts[lo:hi].copy(), starts_second[lo:hi].copy()
        out[:, 0, 0], out[:, 0, 1] = x_a, x_b
        for k in range(steps):
            x_a = first.step(x_a, CounterDraws(stream.master_seed, a_clock, a_marks, np.uint64(k)))
            x_b = second.step(x_b, CounterDraws(stream.master_seed, b_clock, b_marks, np.uint64(k)))
            if not (np.all(np.isfinite(x_a)) and np.all(np.isfinite(x_b))):
                raise NonFiniteStateError(k + 1)
            out[:, k + 1, 0], out[:, k + 1, 1] = x_a, x_b
        return out

    stacked = map_chunks(work, replications)
    return CoupledPaths(stacked[:, :, 0].T.copy(), stacked[:, :, 1].T.copy(), mode)


def first_reversal(paths: CoupledPaths) -> np.ndarray:
    """Per replication, first step where the first path sits at or below the second; inf if none."""
    first = paths.first.reshape(paths.first.shape[0], -1)
    second = paths.second.reshape(paths.second.shape[0], -1)
    reversed_ = first <= second
    hit = reversed_.any(axis=0)
    index = np.argmax(reversed_, axis=0).astype(np.float64)
    return np.where(hit, index, np.inf)


def order_reversal_time(kernel: MarkovKernel, x_hi: float, x_lo: float, mode: CouplingMode,
                        horizon: int, stream: RandomnessStream) -> Optional[int]:
    """First step k <= horizon with path_hi(k) <= path_lo(k); None when the horizon is exceeded."""
    if horizon < 1:
        raise ConfigurationError("horizon must be >= 1")
    if x_lo > x_hi:
        raise ConfigurationError(f"x_lo={x_lo} must not exceed x_hi={x_hi}")
    if x_hi <= x_lo:
        return 0
    tau = first_reversal(coupled_paths(kernel, kernel, x_hi, x_lo, mode, horizon, stream))[0]
    return None if np.isinf(tau) else int(tau)


def reversal_times(kernel: MarkovKernel, x_hi: float, x_lo: float, mode: CouplingMode,
                   horizon: int, replications: int, stream: RandomnessStream) -> np.ndarray:
    """Reversal times of ``replications`` coupled pairs; inf marks an exceeded horizon."""
    if horizon < 1:
        raise ConfigurationError("horizon must be >= 1")
    if x_lo > x_hi:
        raise ConfigurationError(f"x_lo={x_lo} must not exceed x_hi={x_hi}")
    paths = coupled_ensemble(kernel, kernel, x_hi, x_lo, mode, horizon, stream, replications)
    return first_reversal(paths)


def write_coupled_csv(paths: CoupledPaths, path: str):
    paths.to_csv(path)
