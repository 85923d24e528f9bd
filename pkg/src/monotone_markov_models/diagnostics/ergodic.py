"""Running time averages of bounded increasing observables."""

import logging
from dataclasses import dataclass

import numpy as np

from ..distributions import MonotoneObservable
from ..errors import ConfigurationError, EmptySampleError
from ..kernels import MarkovKernel, iterate
from ..random_streams import RandomnessStream

logger = logging.getLogger(__name__)

DEFAULT_BATCHES = 50


@dataclass(frozen=True, eq=False)
class ErgodicAverage:
    """Running averages (1/n) sum h(X_k) and a batch-means standard error of the final one."""
    running: np.ndarray
    stderr: float
    batches: int

    @property
    def mean(self) -> float:
        return float(self.running[-1])

    @property
    def n(self) -> int:
        return int(self.running.size)


def batch_means_stderr(values: np.ndarray, batches: int = DEFAULT_BATCHES) -> float:
    """Standard error from non-overlapping batch means; nan when fewer than two batches fit."""
    if batches < 2:
        raise ConfigurationError(f"batch means need at least 2 batches, got {batches}")
    batches = min(batches, values.size // 2)
    if batches < 2:
        return float("nan")
    size = values.size // batches
    means = values[:size * batches].reshape(batches, size).mean(axis=1)
    return float(np.std(means, ddof=1) / np.sqrt(batches))


def ergodic_average(states, h: MonotoneObservable, burn_in: int = 0, batches: int = DEFAULT_BATCHES) -> ErgodicAverage:
    if not h.declared_monotone:
        raise ConfigurationError(f"observable {h.name} is not declared monotone")
    states = np.asarray(states, dtype=np.float64)[burn_in:]
    if states.size == 0:
        raise EmptySampleError("no states left after burn-in")
    values = h(states)
    if np.any(np.abs(values) > 1.0 + 1e-12):
        raise ConfigurationError(f"observable {h.name} is not bounded by 1")
    running = np.cumsum(values) / np.arange(1, values.size + 1)
    used = min(batches, values.size // 2)
    if used < batches:
        logger.debug(f"{values.size} values: batch means over {used} batches instead of {batches}")
    return ErgodicAverage(running=running, stderr=batch_means_stderr(values, batches), batches=used)


def ergodic_run(kernel: MarkovKernel, x0: float, steps: int, h: MonotoneObservable, burn_in: int,
                stream: RandomnessStream, batches: int = DEFAULT_BATCHES) -> ErgodicAverage:
    path = iterate(kernel, x0, steps, stream)
    average = ergodic_average(path[1:], h, burn_in, batches)
    logger.info(f"{kernel.name}: ergodic average of {h.name} = {average.mean:.5f} +- {average.stderr:.5f}")
    return average
