import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from .const import (
    ANALYTIC_GRID_POINTS,
    ANALYTIC_REFINE_TOLERANCE,
    DEFAULT_CONFIDENCE,
    DOMINANCE_TOLERANCE,
    EFFECTIVE_SUPPORT_TAIL,
    WEIGHT_SUM_TOLERANCE,
)
from .errors import ConfigurationError, EmptySampleError, NonFiniteSampleError

logger = logging.getLogger(__name__)

_REFINE_POINTS = 257
_MAX_REFINEMENTS = 60


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """A weighted sample on the real line, sorted ascending.

    Build instances with :func:`build_empirical`; the constructor expects
    already sorted points.
    """
    points: np.ndarray
    weights: np.ndarray
    _cum0: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64).reshape(-1)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if points.size == 0:
            raise EmptySampleError()
        if points.shape != weights.shape:
            raise ConfigurationError("points and weights must have the same length")
        if np.any(np.diff(points) < 0):
            raise ConfigurationError("points must be sorted ascending")
        if abs(weights.sum() - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ConfigurationError(f"weights sum to {weights.sum()!r}, expected 1")
        n = points.size
        if np.all(weights == weights[0]):
            cumulative = np.arange(1, n + 1, dtype=np.float64) / n
        else:
            cumulative = np.cumsum(weights)
            cumulative /= cumulative[-1]
        cumulative[-1] = 1.0
        cum0 = np.concatenate(([0.0], cumulative))
        for array in (points, weights, cum0):
            array.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_cum0", cum0)

    @property
    def n(self) -> int:
        return int(self.points.size)

    @property
    def cumulative(self) -> np.ndarray:
        return self._cum0[1:]

    @property
    def jump_points(self) -> np.ndarray:
        return np.unique(self.points)

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.weights == self.weights[0]))

    def cdf(self, x):
        """Right-continuous CDF."""
        return self._cum0[np.searchsorted(self.points, x, side="right")]

    def cdf_left(self, x):
        """Left limit F(x-)."""
        return self._cum0[np.searchsorted(self.points, x, side="left")]

    def quantile(self, level):
        """Smallest sample point whose CDF reaches ``level``."""
        idx = np.searchsorted(self.cumulative, np.asarray(level) - WEIGHT_SUM_TOLERANCE, side="left")
        return self.points[np.clip(idx, 0, self.n - 1)]

    def mean(self) -> float:
        return float(np.dot(self.points, self.weights))

    def expectation(self, h: Callable) -> float:
        return float(np.dot(np.asarray(h(self.points), dtype=np.float64), self.weights))

    def resample(self, n: int) -> "EmpiricalDistribution":
        """Deterministic n-point replication through mid-quantiles (i + 0.5) / n."""
        if n == self.n and self.is_uniform:
            return self
        levels = (np.arange(n, dtype=np.float64) + 0.5) / n
        return build_empirical(self.quantile(levels))

    def to_csv(self, path: str):
        data = np.column_stack([self.points, self.weights])
        np.savetxt(path, data, delimiter=",", header="value,weight", comments="", fmt="%.17g")

    @classmethod
    def from_csv(cls, path: str) -> "EmpiricalDistribution":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return build_empirical(data[:, 0], data[:, 1])


def build_empirical(samples: Sequence[float], weights: Optional[Sequence[float]] = None) -> EmpiricalDistribution:
    """Sorts a finite, nonempty sample into an empirical distribution.

    Args:
        samples (Sequence[float]): sample values.
        weights (Sequence[float], optional): nonnegative weights, normalized to sum 1.
            Uniform when omitted.

    Returns:
        EmpiricalDistribution: the sorted distribution.
    """
    values = np.asarray(samples, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise EmptySampleError()
    if not np.all(np.isfinite(values)):
        raise NonFiniteSampleError()
    order = np.argsort(values, kind="stable")
    if weights is None:
        return EmpiricalDistribution(values[order], np.full(values.size, 1.0 / values.size))
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.shape != values.shape:
        raise ConfigurationError("weights must match samples")
    if not np.all(np.isfinite(w)) or np.any(w < 0) or w.sum() <= 0:
        raise ConfigurationError("weights must be finite, nonnegative and not all zero")
    return EmpiricalDistribution(values[order], w[order] / w.sum())


@dataclass(frozen=True, eq=False)
class AnalyticCdf:
    """A closed-form CDF with optional atoms."""
    evaluator: Callable[[np.ndarray], np.ndarray]
    support_lo: float = -np.inf
    support_hi: float = np.inf
    atoms: Tuple[Tuple[float, float], ...] = ()
    quantile_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "analytic"

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        inside = np.clip(np.asarray(self.evaluator(x), dtype=np.float64), 0.0, 1.0)
        return np.where(x < self.support_lo, 0.0, np.where(x >= self.support_hi, 1.0, inside))

    def atom_mass(self, x):
        x = np.asarray(x, dtype=np.float64)
        mass = np.zeros_like(x)
        for location, weight in self.atoms:
            mass = mass + np.where(x == location, weight, 0.0)
        return mass

    def cdf_left(self, x):
        return np.clip(self.cdf(x) - self.atom_mass(x), 0.0, 1.0)

    def quantile(self, level):
        if self.quantile_fn is None:
            raise ConfigurationError(f"{self.name} has no quantile function")
        return self.quantile_fn(np.asarray(level, dtype=np.float64))

    def effective_support(self, tail: float = EFFECTIVE_SUPPORT_TAIL) -> Tuple[float, float]:
        """Interval outside which the CDF is within ``tail`` of 0 or 1."""
        lo, hi = self.support_lo, self.support_hi
        if not np.isfinite(lo):
            lo = float(self.quantile(tail)) if self.quantile_fn is not None else self._search(tail, -1.0)
        if not np.isfinite(hi):
            hi = float(self.quantile(1.0 - tail)) if self.quantile_fn is not None else self._search(tail, 1.0)
        for location, _ in self.atoms:
            lo, hi = min(lo, location), max(hi, location)
        return float(lo), float(hi)

    def _search(self, tail: float, direction: float) -> float:
        x = direction
        for _ in range(1100):
            value = float(self.cdf(x))
            if (direction < 0 and value <= tail) or (direction > 0 and value >= 1.0 - tail):
                return x
            x *= 2.0
        raise ConfigurationError(f"could not bracket the support of {self.name}")

    @classmethod
    def from_scipy(cls, frozen, name: str) -> "AnalyticCdf":
        lo, hi = frozen.support()
        return cls(evaluator=frozen.cdf, support_lo=float(lo), support_hi=float(hi),
                   quantile_fn=frozen.ppf, name=name)

    @classmethod
    def normal(cls, mean: float, sd: float) -> "AnalyticCdf":
        if sd < 0:
            raise ConfigurationError("sd must be nonnegative")
        if sd == 0:
            return cls.point(mean)
        return cls.from_scipy(stats.norm(loc=mean, scale=sd), f"N({mean}, {sd}^2)")

    @classmethod
    def exponential(cls, rate: float, loc: float = 0.0) -> "AnalyticCdf":
        if rate <= 0:
            raise ConfigurationError("rate must be positive")
        return cls.from_scipy(stats.expon(loc=loc, scale=1.0 / rate), f"{loc} + Exp({rate})")

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "AnalyticCdf":
        if not hi > lo:
            raise ConfigurationError("uniform law needs hi > lo")
        return cls.from_scipy(stats.uniform(loc=lo, scale=hi - lo), f"U({lo}, {hi})")

    @classmethod
    def point(cls, location: float) -> "AnalyticCdf":
        return cls(
            evaluator=lambda x: np.where(np.asarray(x) >= location, 1.0, 0.0),
            support_lo=location, support_hi=location,
            atoms=((float(location), 1.0),),
            quantile_fn=lambda u: np.full(np.shape(u), float(location)),
            name=f"delta({location})",
        )


Distribution = Union[EmpiricalDistribution, AnalyticCdf]


@dataclass(frozen=True)
class MonotoneObservable:
    """A bounded test function h with |h| <= 1, declared nondecreasing."""
    evaluator: Callable[[np.ndarray], np.ndarray]
    declared_monotone: bool = True
    name: str = "h"

    def __call__(self, x):
        return np.asarray(self.evaluator(np.asarray(x, dtype=np.float64)), dtype=np.float64)

    @classmethod
    def rescaled(cls, lo: float, hi: float) -> "MonotoneObservable":
        """Affine map of [lo, hi] onto [-1, 1], clipped outside."""
        if not hi > lo:
            raise ConfigurationError("rescaled observable needs hi > lo")
        return cls(lambda x: np.clip(2.0 * (x - lo) / (hi - lo) - 1.0, -1.0, 1.0), name=f"rescaled[{lo},{hi}]")

    @classmethod
    def indicator_above(cls, threshold: float) -> "MonotoneObservable":
        return cls(lambda x: (x > threshold).astype(np.float64), name=f"1{{x>{threshold}}}")

    @classmethod
    def constant(cls, value: float) -> "MonotoneObservable":
        if abs(value) > 1:
            raise ConfigurationError("observable must be bounded by 1")
        return cls(lambda x: np.full(np.shape(x), float(value)), name=f"const({value})")

    @classmethod
    def tanh(cls) -> "MonotoneObservable":
        return cls(np.tanh, name="tanh")


@dataclass(frozen=True)
class DominanceResult:
    holds: bool
    witness: Optional[float] = None
    gap: float = 0.0


@dataclass(frozen=True)
class TightnessInterval:
    level: float
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo


def dkw_band(n: int, confidence: float = DEFAULT_CONFIDENCE) -> float:
    """Two-sided Dvoretzky-Kiefer-Wolfowitz band: sqrt(ln(2 / (1 - confidence)) / (2n))."""
    if n <= 0:
        raise ConfigurationError("DKW band needs n >= 1")
    return float(np.sqrt(np.log(2.0 / (1.0 - confidence)) / (2.0 * n)))


def hoeffding_lower_bound(p_hat: float, n: int, confidence: float = 0.99) -> float:
    """One-sided Hoeffding lower confidence bound for a Bernoulli mean, floored at 0."""
    if n <= 0:
        raise ConfigurationError("Hoeffding bound needs n >= 1")
    return float(max(0.0, p_hat - np.sqrt(np.log(1.0 / (1.0 - confidence)) / (2.0 * n))))


def _check_points(*dists: Distribution) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluation points for sup-type comparisons plus the atom locations needing left limits."""
    pieces, atoms = [], []
    for dist in dists:
        if isinstance(dist, EmpiricalDistribution):
            pieces.append(dist.jump_points)
            atoms.append(dist.jump_points)
        else:
            lo, hi = dist.effective_support()
            if hi == lo:
                lo, hi = lo - 1.0, hi + 1.0
            pieces.append(np.linspace(lo, hi, ANALYTIC_GRID_POINTS))
            atoms.append(np.array([loc for loc, _ in dist.atoms], dtype=np.float64))
    return np.unique(np.concatenate(pieces)), np.unique(np.concatenate(atoms))


def _ks_empirical(phi: EmpiricalDistribution, psi: EmpiricalDistribution) -> float:
    pooled = np.union1d(phi.points, psi.points)
    right = np.abs(phi.cdf(pooled) - psi.cdf(pooled))
    left = np.abs(phi.cdf_left(pooled) - psi.cdf_left(pooled))
    return float(max(right.max(), left.max()))


def _ks_mixed(emp: EmpiricalDistribution, analytic: AnalyticCdf) -> float:
    # on [x_i, x_{i+1}) the empirical CDF is constant and the analytic one monotone,
    # so the sup sits at a right value at x_i or a left limit at x_{i+1}
    x = emp.jump_points
    right = np.abs(emp.cdf(x) - analytic.cdf(x))
    left = np.abs(emp.cdf_left(x) - analytic.cdf_left(x))
    return float(max(right.max(), left.max()))


def _ks_analytic(phi: AnalyticCdf, psi: AnalyticCdf) -> float:
    grid, atoms = _check_points(phi, psi)

    def gap(x):
        return np.abs(phi.cdf(x) - psi.cdf(x))

    values = gap(grid)
    best_index = int(np.argmax(values))
    best = float(values[best_index])
    if atoms.size:
        best = max(best, float(np.abs(phi.cdf_left(atoms) - psi.cdf_left(atoms)).max()))
    center = grid[best_index]
    half_width = (grid[-1] - grid[0]) / (ANALYTIC_GRID_POINTS - 1)
    for _ in range(_MAX_REFINEMENTS):
        fine = np.linspace(center - half_width, center + half_width, _REFINE_POINTS)
        fine_values = gap(fine)
        i = int(np.argmax(fine_values))
        improvement = float(fine_values[i]) - best
        if fine_values[i] > best:
            best = float(fine_values[i])
            center = fine[i]
        half_width = 2.0 * half_width / (_REFINE_POINTS - 1)
        if improvement < ANALYTIC_REFINE_TOLERANCE:
            break
    return best


def kolmogorov_distance(phi: Distribution, psi: Distribution) -> float:
    """sup over c of |F_phi(c) - F_psi(c)|.

    Exact for empirical arguments (both one-sided limits at every jump point);
    grid plus adaptive refinement for two analytic arguments.
    """
    if isinstance(phi, EmpiricalDistribution) and isinstance(psi, EmpiricalDistribution):
        distance = _ks_empirical(phi, psi)
    elif isinstance(phi, EmpiricalDistribution):
        distance = _ks_mixed(phi, psi)
    elif isinstance(psi, EmpiricalDistribution):
        distance = _ks_mixed(psi, phi)
    else:
        distance = _ks_analytic(phi, psi)
    return float(min(max(distance, 0.0), 1.0))


def bhattacharya_1d(phi: Distribution, psi: Distribution) -> float:
    """Bhattacharya distance on the real line: twice the Kolmogorov distance."""
    return 2.0 * kolmogorov_distance(phi, psi)


def dominates_sd(phi: Distribution, psi: Distribution, tolerance: float = DOMINANCE_TOLERANCE) -> DominanceResult:
    """Tests phi <=_sd psi, i.e. F_phi(c) >= F_psi(c) for every c.

    Returns:
        DominanceResult: ``holds`` plus, on failure, a point ``witness`` where
        F_psi exceeds F_phi by ``gap`` > tolerance.
    """
    grid, atoms = _check_points(phi, psi)
    right_gap = psi.cdf(grid) - phi.cdf(grid)
    candidates = [(float(right_gap.max()), float(grid[int(np.argmax(right_gap))]))]
    if atoms.size:
        left_gap = psi.cdf_left(atoms) - phi.cdf_left(atoms)
        i = int(np.argmax(left_gap))
        candidates.append((float(left_gap[i]), float(np.nextafter(atoms[i], -np.inf))))
    gap, witness = max(candidates)
    if gap > tolerance:
        return DominanceResult(holds=False, witness=witness, gap=gap)
    return DominanceResult(holds=True, gap=max(gap, 0.0))


def tightness_profile(family: Sequence[EmpiricalDistribution], levels: Sequence[float]) -> List[TightnessInterval]:
    """Smallest common interval [a, b] carrying mass >= 1 - eps under every member.

    Endpoints are pooled sample points. For each candidate a, b(a) is the
    largest over members of the member quantile at F_m(a-) + 1 - eps.
    """
    if len(family) == 0:
        raise EmptySampleError("empty family")
    candidates = np.unique(np.concatenate([member.points for member in family]))
    profile = []
    for eps in levels:
        if not 0.0 < eps < 1.0:
            raise ConfigurationError(f"tightness level must lie in (0, 1), got {eps}")
        upper = np.full(candidates.shape, -np.inf)
        for member in family:
            target = member.cdf_left(candidates) + (1.0 - eps)
            idx = np.searchsorted(member.cumulative, target - WEIGHT_SUM_TOLERANCE, side="left")
            b = np.where(idx < member.n, member.points[np.minimum(idx, member.n - 1)], np.inf)
            upper = np.maximum(upper, b)
        widths = upper - candidates
        best = int(np.argmin(widths))
        profile.append(TightnessInterval(level=float(eps), lo=float(candidates[best]), hi=float(upper[best])))
    return profile


def write_cdf_report(phi: Distribution, psi: Distribution, path: str):
    """CSV with columns c,F_phi,F_psi,diff over the comparison points."""
    grid, _ = _check_points(phi, psi)
    f_phi, f_psi = phi.cdf(grid), psi.cdf(grid)
    data = np.column_stack([grid, f_phi, f_psi, f_phi - f_psi])
    np.savetxt(path, data, delimiter=",", header="c,F_phi,F_psi,diff", comments="", fmt="%.17g")
