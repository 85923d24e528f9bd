"""Mixing certificates: monotone mixing by simulation, order-reversal survival, pathwise order checks."""

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from ..const import CouplingMode
from ..couplings import coupled_ensemble, reversal_times
from ..distributions import hoeffding_lower_bound
from ..errors import ConfigurationError
from ..kernels import MarkovKernel, propagate
from ..models.base import StochasticModel
from ..random_streams import RandomnessStream

logger = logging.getLogger(__name__)

MIN_TRIALS = 1000
HOEFFDING_CONFIDENCE = 0.99


class MmcEstimate(BaseModel):
    """Simulated P_u(a, [pivot, inf)) and P_u(b, (-inf, pivot]) with their Hoeffding lower bounds."""
    p_up: float
    p_down: float
    lower_up: float
    lower_down: float
    n_trials: int
    confidence_each: float = HOEFFDING_CONFIDENCE

    @property
    def epsilon_low(self) -> float:
        return min(self.lower_up, self.lower_down)

    @property
    def certified(self) -> bool:
        return self.epsilon_low > 0

    @property
    def joint_confidence(self) -> float:
        return 1.0 - 2.0 * (1.0 - self.confidence_each)


def mmc_monte_carlo(kernel: MarkovKernel, a: float, b: float, pivot: float, u_steps: int, n_trials: int,
                    stream: RandomnessStream) -> MmcEstimate:
    """Runs u_steps of the kernel from a and from b; the two runs use child streams 0 and 1."""
    if not a <= pivot <= b:
        raise ConfigurationError(f"need a <= pivot <= b, got {a}, {pivot}, {b}")
    if n_trials < MIN_TRIALS:
        raise ConfigurationError(f"n_trials must be >= {MIN_TRIALS}, got {n_trials}")
    up = propagate(kernel, np.full(n_trials, a, dtype=np.float64), u_steps, stream.child(0))
    down = propagate(kernel, np.full(n_trials, b, dtype=np.float64), u_steps, stream.child(1))
    p_up = float(np.mean(up >= pivot))
    p_down = float(np.mean(down <= pivot))
    estimate = MmcEstimate(p_up=p_up, p_down=p_down,
                           lower_up=hoeffding_lower_bound(p_up, n_trials, HOEFFDING_CONFIDENCE),
                           lower_down=hoeffding_lower_bound(p_down, n_trials, HOEFFDING_CONFIDENCE),
                           n_trials=n_trials)
    logger.info(f"{kernel.name}: MMC through {pivot}: up {p_up:.4f}, down {p_down:.4f}, "
                f"epsilon_low {estimate.epsilon_low:.4f}")
    return estimate


class SurvivalPoint(BaseModel):
    index: int
    survival: float
    stderr: float
    bound: Optional[float] = None


class MixingReport(BaseModel):
    mode: CouplingMode
    x_hi: float
    x_lo: float
    replications: int
    points: List[SurvivalPoint]
    bound_label: str = ""

    @model_validator(mode="after")
    def _check_survival(self):
        survival = np.array([point.survival for point in self.points])
        if np.any(survival < 0) or np.any(survival > 1):
            raise ValueError("survival values must lie in [0, 1]")
        if np.any(np.diff(survival) > 0):
            raise ValueError("survival must be nonincreasing")
        return self

    @property
    def survival(self) -> np.ndarray:
        return np.array([point.survival for point in self.points])

    def violations(self, z: float = 3.0) -> List[int]:
        """Indices where the survival exceeds the theoretical bound by more than z standard errors."""
        return [point.index for point in self.points
                if point.bound is not None and point.survival > point.bound + z * point.stderr]

    def to_csv(self, path: str):
        with open(path, "w") as f:
            f.write("index,survival,stderr,bound\n")
            for point in self.points:
                bound = "" if point.bound is None else repr(point.bound)
                f.write(f"{point.index},{point.survival!r},{point.stderr!r},{bound}\n")


def order_reversal_survival(kernel: MarkovKernel, x_hi: float, x_lo: float, mode: CouplingMode, horizon: int,
                            n_reps: int, stream: RandomnessStream,
                            bound: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                            bound_label: str = "") -> MixingReport:
    """Empirical P{tau > n} for n = 0..horizon, tau the first step with path_hi <= path_lo.

    The standard error of each point is the larger of the empirical binomial
    error and the error the bound itself would imply.
    """
    if n_reps < MIN_TRIALS:
        raise ConfigurationError(f"n_reps must be >= {MIN_TRIALS}, got {n_reps}")
    tau = reversal_times(kernel, x_hi, x_lo, mode, horizon, n_reps, stream)
    index = np.arange(horizon + 1)
    survival = np.mean(tau[None, :] > index[:, None], axis=1)
    bounds = None if bound is None else np.clip(np.asarray(bound(index), dtype=np.float64), 0.0, 1.0)
    reference = survival if bounds is None else np.maximum(survival, bounds)
    stderr = np.sqrt(reference * (1.0 - reference) / n_reps)
    points = [SurvivalPoint(index=int(n), survival=float(s), stderr=float(e),
                            bound=None if bounds is None else float(bounds[n]))
              for n, s, e in zip(index, survival, stderr)]
    report = MixingReport(mode=mode, x_hi=x_hi, x_lo=x_lo, replications=n_reps, points=points,
                          bound_label=bound_label)
    if report.violations():
        logger.warning(f"{kernel.name}: survival above {bound_label} at {report.violations()}")
    return report


def model_reversal_survival(model: StochasticModel, horizon: int, n_reps: int,
                            stream: RandomnessStream) -> Optional[MixingReport]:
    setup = model.reversal_setup()
    if setup is None:
        return None
    return order_reversal_survival(model.step_kernel(), setup.x_hi, setup.x_lo, setup.mode, horizon, n_reps,
                                   stream, setup.bound, setup.bound_label)


class CouplingCheck(BaseModel):
    holds: bool
    trials: int
    steps: int
    witness: Optional[Tuple[int, int]] = None


def check_monotone_coupling(kernel: MarkovKernel, lo_starts, hi_starts, steps: int,
                            stream: RandomnessStream) -> CouplingCheck:
    """Shared-noise pairs from ordered starts; the witness is the first (trial, step) where order fails."""
    lo_starts = np.asarray(lo_starts, dtype=np.float64)
    hi_starts = np.asarray(hi_starts, dtype=np.float64)
    if np.any(lo_starts > hi_starts):
        raise ConfigurationError("starts must be ordered: lo <= hi")
    paths = coupled_ensemble(kernel, kernel, lo_starts, hi_starts, CouplingMode.SHARED_NOISE, steps, stream)
    broken = paths.first > paths.second
    trials = paths.first.shape[1]
    if not broken.any():
        return CouplingCheck(holds=True, trials=trials, steps=steps)
    step, trial = np.argwhere(broken)[0]
    logger.warning(f"{kernel.name}: shared-noise order broken in trial {trial} at step {step}")
    return CouplingCheck(holds=False, trials=trials, steps=steps, witness=(int(trial), int(step)))


def ordered_starts(model: StochasticModel, trials: int, stream: RandomnessStream) -> Tuple[np.ndarray, np.ndarray]:
    """Random pairs lo <= hi inside the state bounds, or within +-4 of the default start when unbounded."""
    u = stream.block(0, trials)
    bounds = model.state_bounds()
    if bounds is None:
        centre = model.default_start()
        bounds = (centre - 4.0, centre + 4.0)
    low, high = bounds
    lo = low + (high - low) * u.marks(0)
    hi = lo + (high - lo) * u.marks(1)
    return lo, hi


def model_coupling_check(model: StochasticModel, trials: int, steps: int, stream: RandomnessStream) -> CouplingCheck:
    lo, hi = ordered_starts(model, trials, stream.child(0))
    return check_monotone_coupling(model.step_kernel(), lo, hi, steps, stream.child(1))
