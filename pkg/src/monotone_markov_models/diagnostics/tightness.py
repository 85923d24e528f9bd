"""Tightness of trajectory laws: the mass-(1 - eps) intervals stop growing."""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..distributions import EmpiricalDistribution, TightnessInterval, tightness_profile
from ..errors import ConfigurationError
from ..models.base import StochasticModel
from ..random_streams import RandomnessStream
from .convergence import advance_through

logger = logging.getLogger(__name__)

WIDENING = 0.25


@dataclass(frozen=True)
class TightnessCheck:
    level: float
    early: TightnessInterval
    late: TightnessInterval

    @property
    def stable(self) -> bool:
        slack = WIDENING * self.early.width
        return self.early.lo - slack <= self.late.lo and self.late.hi <= self.early.hi + slack


def tightness_check(family: Sequence[EmpiricalDistribution], level: float = 0.05) -> TightnessCheck:
    """Compares the profile of the second half of the family with that of the first half."""
    if len(family) < 2:
        raise ConfigurationError("tightness check needs at least two distributions")
    half = len(family) // 2
    early = tightness_profile(family[:half], [level])[0]
    late = tightness_profile(family[half:], [level])[0]
    check = TightnessCheck(level=level, early=early, late=late)
    if not check.stable:
        logger.warning(f"tightness intervals still moving: {early} then {late}")
    return check


def trajectory_family(model: StochasticModel, x0: float, times: Sequence[float], n_paths: int,
                      stream: RandomnessStream) -> List[EmpiricalDistribution]:
    """Laws of X_t from X_0 = x0 at each of ``times``."""
    states = np.full(n_paths, x0, dtype=np.float64)
    return list(advance_through(model, states, np.asarray(times, dtype=np.float64), stream))
