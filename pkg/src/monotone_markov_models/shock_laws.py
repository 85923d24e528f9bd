"""Shock and reset laws, sampled by inverse CDF from counter-based uniforms."""

import logging
from abc import ABC, abstractmethod
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, model_validator
from scipy import integrate, special, stats

from .distributions import AnalyticCdf
from .random_streams import Draws

logger = logging.getLogger(__name__)


class ShockLawBase(BaseModel, ABC):
    model_config = {
        "extra": "forbid",
        "frozen": True,
    }

    @abstractmethod
    def ppf(self, u: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def analytic(self) -> AnalyticCdf:
        pass

    @abstractmethod
    def difference_exceedance(self, gap: float) -> float:
        """P{Z' - Z >= gap} for independent Z, Z' drawn from this law."""
        pass

    @property
    @abstractmethod
    def expected_value(self) -> float:
        pass

    @property
    def is_point(self) -> bool:
        return False

    def cdf(self, x) -> np.ndarray:
        return self.analytic().cdf(x)

    def sample(self, draws: Draws, slot: int) -> np.ndarray:
        return self.ppf(draws.marks(slot))


class PointLaw(ShockLawBase):
    family: Literal["point"] = "point"
    value: float = 0.0

    def ppf(self, u):
        return np.full(np.shape(u), self.value, dtype=np.float64)

    def analytic(self):
        return AnalyticCdf.point(self.value)

    def difference_exceedance(self, gap):
        return 1.0 if gap <= 0 else 0.0

    @property
    def expected_value(self):
        return self.value

    @property
    def is_point(self):
        return True


class NormalLaw(ShockLawBase):
    family: Literal["normal"] = "normal"
    mean: float = 0.0
    sd: float = Field(ge=0.0)

    def ppf(self, u):
        if self.sd == 0:
            return np.full(np.shape(u), self.mean, dtype=np.float64)
        return self.mean + self.sd * special.ndtri(u)

    def analytic(self):
        return AnalyticCdf.normal(self.mean, self.sd)

    def difference_exceedance(self, gap):
        if self.sd == 0:
            return 1.0 if gap <= 0 else 0.0
        return float(special.ndtr(-gap / (self.sd * np.sqrt(2.0))))

    @property
    def expected_value(self):
        return self.mean

    @property
    def is_point(self):
        return self.sd == 0


class ExponentialLaw(ShockLawBase):
    family: Literal["exponential"] = "exponential"
    rate: float = Field(gt=0.0)
    loc: float = 0.0

    def ppf(self, u):
        return self.loc - np.log1p(-np.asarray(u)) / self.rate

    def analytic(self):
        return AnalyticCdf.exponential(self.rate, self.loc)

    def difference_exceedance(self, gap):
        # the difference of two iid exponentials is Laplace(0, 1/rate)
        if gap >= 0:
            return float(0.5 * np.exp(-self.rate * gap))
        return float(1.0 - 0.5 * np.exp(self.rate * gap))

    @property
    def expected_value(self):
        return self.loc + 1.0 / self.rate


class BetaLaw(ShockLawBase):
    family: Literal["beta"] = "beta"
    a: float = Field(gt=0.0)
    b: float = Field(gt=0.0)

    def ppf(self, u):
        return special.betaincinv(self.a, self.b, u)

    def analytic(self):
        return AnalyticCdf.from_scipy(stats.beta(self.a, self.b), f"Beta({self.a}, {self.b})")

    def difference_exceedance(self, gap):
        if gap <= -1:
            return 1.0
        if gap >= 1:
            return 0.0

        def integrand(z):
            return (1.0 - special.betainc(self.a, self.b, np.clip(z + gap, 0.0, 1.0))) * stats.beta.pdf(z, self.a, self.b)

        value, _ = integrate.quad(integrand, 0.0, 1.0, limit=200)
        return float(np.clip(value, 0.0, 1.0))

    @property
    def expected_value(self):
        return self.a / (self.a + self.b)


class UniformLaw(ShockLawBase):
    family: Literal["uniform"] = "uniform"
    low: float = 0.0
    high: float = 1.0

    @model_validator(mode="after")
    def _check_bounds(self):
        if not self.high > self.low:
            raise ValueError("uniform law needs high > low")
        return self

    def ppf(self, u):
        return self.low + (self.high - self.low) * np.asarray(u)

    def analytic(self):
        return AnalyticCdf.uniform(self.low, self.high)

    def difference_exceedance(self, gap):
        width = self.high - self.low
        if gap >= width:
            return 0.0
        if gap <= -width:
            return 1.0
        if gap >= 0:
            return float((width - gap) ** 2 / (2.0 * width ** 2))
        return float(1.0 - (width + gap) ** 2 / (2.0 * width ** 2))

    @property
    def expected_value(self):
        return 0.5 * (self.low + self.high)


ShockLaw = Annotated[
    Union[PointLaw, NormalLaw, ExponentialLaw, BetaLaw, UniformLaw],
    Field(discriminator="family"),
]

shock_law_adapter = TypeAdapter(ShockLaw)


def parse_shock_law(data: str | dict) -> ShockLawBase:
    if isinstance(data, str):
        return shock_law_adapter.validate_json(data)
    elif isinstance(data, dict):
        return shock_law_adapter.validate_python(data)
    else:
        raise TypeError(f"Input must be a JSON string or a dictionary, not {type(data)}")
