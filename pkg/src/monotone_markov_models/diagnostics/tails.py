"""Hill estimation of Pareto tail exponents."""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from ..const import BOOTSTRAP_RESAMPLES, MIN_TAIL_EXCEEDANCES
from ..errors import ConfigurationError, InsufficientTailDataError, NonFiniteSampleError
from ..random_streams import RandomnessStream

logger = logging.getLogger(__name__)


class TailEstimate(BaseModel):
    alpha: float = Field(gt=0.0)
    k: int
    n: int
    ci_low: float
    ci_high: float
    confidence: float
    threshold: float
    theoretical_alpha: Optional[float] = None


def _hill(y: np.ndarray, k: int) -> float:
    n = y.size
    part = np.partition(y, n - k - 1)
    threshold = part[n - k - 1]
    spread = np.sum(np.log(part[n - k:]) - np.log(threshold))
    if not spread > 0:
        raise InsufficientTailDataError("top order statistics are all tied")
    return float(k / spread)


def default_k(n: int) -> int:
    return int(min(np.floor(n ** (2.0 / 3.0)), n // 10))


def hill_tail_exponent(samples, k: Optional[int] = None, stream: Optional[RandomnessStream] = None,
                       n_boot: int = BOOTSTRAP_RESAMPLES, confidence: float = 0.95,
                       theoretical_alpha: Optional[float] = None) -> TailEstimate:
    """Hill estimator on the k largest of positive samples, with a percentile bootstrap interval.

    Raises:
        InsufficientTailDataError: when k < 10, k > n / 10 or fewer than 10 samples exceed the threshold.
    """
    y = np.asarray(samples, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(y)):
        raise NonFiniteSampleError()
    if np.any(y <= 0):
        raise ConfigurationError("Hill estimation needs positive samples (income, not log income)")
    n = y.size
    k = default_k(n) if k is None else k
    if k < MIN_TAIL_EXCEEDANCES or k > n // 10:
        raise InsufficientTailDataError(f"need {MIN_TAIL_EXCEEDANCES} <= k <= n/10, got k={k} with n={n}")
    threshold = float(np.partition(y, n - k - 1)[n - k - 1])
    exceedances = int(np.sum(y > threshold))
    if exceedances < MIN_TAIL_EXCEEDANCES:
        raise InsufficientTailDataError(f"only {exceedances} samples exceed the threshold {threshold}")
    alpha = _hill(y, k)

    rng = (stream or RandomnessStream(master_seed=0)).generator()
    boot = np.empty(n_boot)
    for b in range(n_boot):
        boot[b] = _hill(y[rng.integers(0, n, n)], k)
    tail = 100.0 * (1.0 - confidence) / 2.0
    ci_low, ci_high = np.percentile(boot, [tail, 100.0 - tail])
    logger.info(f"Hill estimate alpha={alpha:.4f} from k={k} of n={n}, CI [{ci_low:.4f}, {ci_high:.4f}]")
    return TailEstimate(alpha=alpha, k=k, n=n, ci_low=float(ci_low), ci_high=float(ci_high),
                        confidence=confidence, threshold=threshold, theoretical_alpha=theoretical_alpha)


def pareto_samples(alpha: float, n: int, stream: RandomnessStream, scale: float = 1.0) -> np.ndarray:
    """Exact Pareto draws scale * U^(-1 / alpha)."""
    if alpha <= 0 or scale <= 0:
        raise ConfigurationError("Pareto samples need alpha > 0 and scale > 0")
    return scale * stream.uniforms(n) ** (-1.0 / alpha)
