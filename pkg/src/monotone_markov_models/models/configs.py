"""Declarative model configurations.

Every section of a model file maps onto one of the configs below; unknown
keys are rejected so a typo never silently changes a certificate.
"""

import json
import logging
import math
from typing import Annotated, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..errors import ConfigurationError, ModelError
from ..shock_laws import ExponentialLaw, NormalLaw, ShockLaw

logger = logging.getLogger(__name__)


class ConfigBase(BaseModel):
    model_config = {
        "extra": "forbid",
        "frozen": True,
    }

    @classmethod
    def from_input(cls, data: str | dict):
        if isinstance(data, str):
            return cls.model_validate_json(data)
        elif isinstance(data, dict):
            return cls.model_validate(data)
        else:
            raise TypeError(f"Input must be a JSON string or a dictionary, not {type(data)}")

    @classmethod
    def from_json_file(cls, path: str):
        with open(path, "r") as f:
            return cls.from_input(json.load(f))

    def to_dict(self) -> dict:
        return self.model_dump(exclude_none=True)

    def to_json(self) -> str:
        return self.model_dump_json(exclude_none=True, indent=4)


class AffineBeta(ConfigBase):
    """w -> offset + scale * w * Beta(a, b)."""
    offset: float = Field(default=0.0, ge=0.0)
    scale: float = Field(default=1.0, ge=0.0)
    a: float = Field(gt=0.0)
    b: float = Field(gt=0.0)


class MmcData(ConfigBase):
    pivot: float
    steps: int = Field(default=1, ge=1)
    epsilon: Optional[float] = Field(default=None, gt=0.0, le=1.0)


class WageLadderConfig(ConfigBase):
    destruction_rate: float = Field(gt=0.0)
    offer_rate: float = Field(gt=0.0)
    wage_ceiling: float = Field(default=1.0, gt=0.0)
    destruction_kernel: AffineBeta
    offer_kernel: AffineBeta
    mmc: Optional[MmcData] = None

    @model_validator(mode="after")
    def _check_kernels_map_into_ladder(self):
        for name, kernel in (("destruction_kernel", self.destruction_kernel), ("offer_kernel", self.offer_kernel)):
            top = kernel.offset + kernel.scale * self.wage_ceiling
            if top > self.wage_ceiling:
                raise ValueError(f"{name} maps {self.wage_ceiling} to {top}, outside [0, {self.wage_ceiling}]")
        if self.mmc is not None and not 0.0 <= self.mmc.pivot <= self.wage_ceiling:
            raise ValueError(f"pivot {self.mmc.pivot} outside [0, {self.wage_ceiling}]")
        return self

    @property
    def total_rate(self) -> float:
        return self.destruction_rate + self.offer_rate

    @property
    def destruction_probability(self) -> float:
        return self.destruction_rate / self.total_rate


class ConstantReset(ConfigBase):
    kind: Literal["constant"] = "constant"
    level: float = 0.0

    @property
    def bounds(self) -> Tuple[float, float]:
        return self.level, self.level

    def __call__(self, x):
        return np.full(np.shape(x), self.level, dtype=np.float64)


class ClippedLinearReset(ConfigBase):
    """h(x) = clip(intercept + slope * x, lower, upper)."""
    kind: Literal["clipped_linear"] = "clipped_linear"
    intercept: float = 0.0
    slope: float = Field(default=0.0, ge=0.0)
    lower: float
    upper: float

    @model_validator(mode="after")
    def _check_bounds(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("reset function bounds must be finite")
        if self.lower > self.upper:
            raise ValueError(f"lower={self.lower} exceeds upper={self.upper}")
        return self

    @property
    def bounds(self) -> Tuple[float, float]:
        return self.lower, self.upper

    def __call__(self, x):
        return np.clip(self.intercept + self.slope * np.asarray(x, dtype=np.float64), self.lower, self.upper)


ResetFunction = Annotated[Union[ConstantReset, ClippedLinearReset], Field(discriminator="kind")]


class BoundedReset:
    """A user reset function h with declared finite bounds inf h and sup h.

    Evaluations leaving the declared bounds raise :class:`ModelError`.
    """

    def __init__(self, fn, inf_h: float, sup_h: float, name: str = "h"):
        self.fn = fn
        self.inf_h = float(inf_h)
        self.sup_h = float(sup_h)
        self.name = name

    @property
    def bounds(self) -> Tuple[float, float]:
        return self.inf_h, self.sup_h

    def __call__(self, x):
        values = np.asarray(self.fn(np.asarray(x, dtype=np.float64)), dtype=np.float64)
        if np.any(values < self.inf_h) or np.any(values > self.sup_h):
            raise ModelError(f"{self.name} left its declared bounds [{self.inf_h}, {self.sup_h}]")
        return values


def bounded_reset(fn, inf_h: float, sup_h: float, name: str = "h") -> BoundedReset:
    if not (np.isfinite(inf_h) and np.isfinite(sup_h)):
        raise ConfigurationError("reset function must be bounded: declare finite inf h and sup h")
    if inf_h > sup_h:
        raise ConfigurationError(f"inf h={inf_h} exceeds sup h={sup_h}")
    return BoundedReset(fn, inf_h, sup_h, name)


class BeliefShockConfig(ConfigBase):
    mean_high: float = 0.3
    mean_low: float = 0.0
    signal_sd: float = Field(default=1.0, gt=0.0)
    reset_probability: float = Field(ge=0.0, le=1.0)
    reset_law: ShockLaw = NormalLaw(mean=0.0, sd=0.5)

    @model_validator(mode="after")
    def _check_means(self):
        if not self.mean_high > self.mean_low:
            raise ValueError("mean_high must exceed mean_low")
        return self

    @property
    def signal_gap(self) -> float:
        return self.mean_high - self.mean_low

    @property
    def signal_midpoint(self) -> float:
        return 0.5 * (self.mean_high + self.mean_low)

    @property
    def drift(self) -> float:
        """E[xi] under the high state: gap^2 / (2 sigma^2)."""
        return self.signal_gap ** 2 / (2.0 * self.signal_sd ** 2)


class PureJumpIncomeConfig(ConfigBase):
    shock_rate: float = Field(gt=0.0)
    reset_rate: float = Field(gt=0.0)
    raise_law: ShockLaw
    reset_law: ShockLaw
    reset_function: ResetFunction = ConstantReset()

    @model_validator(mode="after")
    def _check_raises_positive(self):
        lo, _ = self.raise_law.analytic().effective_support()
        if lo < 0 or self.raise_law.expected_value <= 0:
            raise ValueError("raise_law must live on (0, inf)")
        return self

    @property
    def total_rate(self) -> float:
        return self.shock_rate + self.reset_rate

    @property
    def p(self) -> float:
        return self.reset_rate / self.total_rate

    @property
    def q(self) -> float:
        return self.shock_rate / self.total_rate


class ConstantDrift(ConfigBase):
    kind: Literal["constant"] = "constant"
    mu: float


class LinearDrift(ConfigBase):
    """g(x) = intercept + slope * x."""
    kind: Literal["linear"] = "linear"
    intercept: float = 0.0
    slope: float


Drift = Annotated[Union[ConstantDrift, LinearDrift], Field(discriminator="kind")]


class DriftIncomeConfig(ConfigBase):
    drift: Drift
    jump_rate: float = Field(gt=0.0)
    reset_law: ShockLaw
    reset_function: ResetFunction = ConstantReset()


class OuConfig(ConfigBase):
    theta: float = Field(gt=0.0)
    sigma: float = Field(gt=0.0)

    def sigma_t(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.sigma * np.sqrt(-np.expm1(-2.0 * self.theta * t) / (2.0 * self.theta))

    @property
    def sigma_bar(self) -> float:
        return self.sigma / math.sqrt(2.0 * self.theta)


class ReflectionConfig(ConfigBase):
    """x -> -slope * x + noise: order reversing by construction."""
    slope: float = Field(default=0.5, gt=0.0, lt=1.0)
    noise_sd: float = Field(default=1.0, gt=0.0)


class ModelFile(ConfigBase):
    wage: Optional[WageLadderConfig] = None
    belief: Optional[BeliefShockConfig] = None
    pure_jump_income: Optional[PureJumpIncomeConfig] = None
    drift_income: Optional[DriftIncomeConfig] = None
    ou: Optional[OuConfig] = None
    reflection: Optional[ReflectionConfig] = None

    @model_validator(mode="after")
    def _check_one_section(self):
        present = [name for name in type(self).model_fields if getattr(self, name) is not None]
        if len(present) != 1:
            raise ValueError(f"a model file holds exactly one model section, found {present or 'none'}")
        return self

    @property
    def section(self) -> Tuple[str, ConfigBase]:
        for name in type(self).model_fields:
            value = getattr(self, name)
            if value is not None:
                return name, value
        raise ConfigurationError("empty model file")


def is_pareto_specialization(cfg: PureJumpIncomeConfig) -> bool:
    """h constant, point resets and exponential raises."""
    return (isinstance(cfg.reset_function, ConstantReset) and cfg.reset_law.is_point
            and isinstance(cfg.raise_law, ExponentialLaw) and cfg.raise_law.loc == 0.0)
