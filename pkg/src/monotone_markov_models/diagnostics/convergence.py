"""Distance-to-target curves and exponential rate fits."""

import json
import logging
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import stats

from ..const import DEFAULT_CONFIDENCE, NOISE_FLOOR_MULTIPLE, ConvergenceStatus
from ..distributions import (
    Distribution,
    EmpiricalDistribution,
    bhattacharya_1d,
    build_empirical,
    dkw_band,
)
from ..errors import ConfigurationError
from ..models.base import StochasticModel
from ..random_streams import RandomnessStream

logger = logging.getLogger(__name__)

MIN_PATHS = 1000


class ConvergencePoint(BaseModel):
    t: float
    beta_hat: float = Field(ge=0.0, le=2.0)
    bound: Optional[float] = None


class ConvergenceReport(BaseModel):
    model_config = {
        "extra": "forbid",
    }
    model: str
    target: str
    checkpoints: List[ConvergencePoint]
    n_paths: int
    mc_band: float
    confidence: float
    status: ConvergenceStatus
    fitted_rate: Optional[float] = None
    fitted_prefactor: Optional[float] = None
    theoretical_rate: Optional[float] = None
    theoretical_prefactor: Optional[float] = None

    @model_validator(mode="after")
    def _check_increasing(self):
        times = [point.t for point in self.checkpoints]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("checkpoints must be strictly increasing in t")
        return self

    @property
    def times(self) -> np.ndarray:
        return np.array([point.t for point in self.checkpoints])

    @property
    def betas(self) -> np.ndarray:
        return np.array([point.beta_hat for point in self.checkpoints])

    def to_csv(self, path: str):
        with open(path, "w") as f:
            f.write("t,beta_hat,bound\n")
            for point in self.checkpoints:
                bound = "" if point.bound is None else repr(point.bound)
                f.write(f"{point.t!r},{point.beta_hat!r},{bound}\n")

    def summary(self) -> dict:
        return self.model_dump(mode="json", exclude={"checkpoints"})

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=4)


def _check_checkpoints(checkpoints: Sequence[float]) -> np.ndarray:
    times = np.asarray(checkpoints, dtype=np.float64)
    if times.size == 0:
        raise ConfigurationError("checkpoints must not be empty")
    if np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise ConfigurationError("checkpoints must be >= 0 and strictly increasing")
    return times


def fit_rate(times: np.ndarray, betas: np.ndarray, noise_floor: float):
    """Least squares fit of log beta = log C - alpha t over points above the noise floor."""
    above = betas > noise_floor
    if not above.any():
        return ConvergenceStatus.ALREADY_CONVERGED, None, None
    if above.sum() < 2:
        return ConvergenceStatus.TOO_FEW_POINTS, None, None
    fit = stats.linregress(times[above], np.log(betas[above]))
    return ConvergenceStatus.FITTED, float(-fit.slope), float(np.exp(fit.intercept))


def advance_through(model: StochasticModel, states: np.ndarray, times: np.ndarray, stream: RandomnessStream):
    """Yields the states at each checkpoint; leg i uses child stream i."""
    previous = 0.0
    for i, t in enumerate(times):
        states = model.advance(states, t - previous, stream.child(i))
        previous = t
        yield build_empirical(states)


def convergence_curve(model: StochasticModel, phi0: EmpiricalDistribution, checkpoints: Sequence[float],
                      target: Distribution, n_paths: int, stream: RandomnessStream,
                      confidence: float = DEFAULT_CONFIDENCE) -> ConvergenceReport:
    """beta(phi0 P_t, target) at each checkpoint, with an exponential fit outside the noise floor."""
    times = _check_checkpoints(checkpoints)
    if n_paths < MIN_PATHS:
        raise ConfigurationError(f"n_paths must be >= {MIN_PATHS}, got {n_paths}")
    mc_band = dkw_band(n_paths, confidence)
    if isinstance(target, EmpiricalDistribution):
        mc_band += dkw_band(target.n, confidence)

    betas = np.array([bhattacharya_1d(law, target)
                      for law in advance_through(model, phi0.resample(n_paths).points, times, stream)])
    status, rate, prefactor = fit_rate(times, betas, NOISE_FLOOR_MULTIPLE * mc_band)
    if status != ConvergenceStatus.FITTED:
        logger.warning(f"{model.name}: no rate fit ({status.value}), beta_hat inside the noise floor")

    reference = model.reference_curve(phi0, times)
    constants = model.mmc_constants()
    bounds = [None] * times.size if reference is None else [float(r) for r in reference]
    points = [ConvergencePoint(t=float(t), beta_hat=float(b), bound=r) for t, b, r in zip(times, betas, bounds)]
    report = ConvergenceReport(
        model=model.name, target=getattr(target, "name", "long-run empirical"), checkpoints=points,
        n_paths=n_paths, mc_band=mc_band, confidence=confidence, status=status,
        fitted_rate=rate, fitted_prefactor=prefactor,
        theoretical_rate=None if constants is None else constants.alpha,
        theoretical_prefactor=None if constants is None else constants.C,
    )
    logger.info(f"{model.name}: convergence {status.value}, alpha_hat={rate}, C_hat={prefactor}")
    return report


class ContractivityCurve(BaseModel):
    times: List[float]
    betas: List[float]
    mc_band: float

    def nonincreasing_within_band(self, multiple: float = NOISE_FLOOR_MULTIPLE) -> bool:
        betas = np.asarray(self.betas)
        running_min = np.minimum.accumulate(betas)
        return bool(np.all(betas <= running_min + multiple * self.mc_band))


def asymptotic_contractivity_curve(model: StochasticModel, phi0: EmpiricalDistribution, psi0: EmpiricalDistribution,
                                   checkpoints: Sequence[float], n_paths: int, stream: RandomnessStream,
                                   confidence: float = DEFAULT_CONFIDENCE) -> ContractivityCurve:
    """beta(phi0 P_t, psi0 P_t) with the two ensembles on child streams 0 and 1."""
    times = _check_checkpoints(checkpoints)
    if n_paths < MIN_PATHS:
        raise ConfigurationError(f"n_paths must be >= {MIN_PATHS}, got {n_paths}")
    left = advance_through(model, phi0.resample(n_paths).points, times, stream.child(0))
    right = advance_through(model, psi0.resample(n_paths).points, times, stream.child(1))
    betas = [bhattacharya_1d(a, b) for a, b in zip(left, right)]
    return ContractivityCurve(times=times.tolist(), betas=betas, mc_band=2.0 * dkw_band(n_paths, confidence))
