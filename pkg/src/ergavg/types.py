"""Shared type definitions for ergavg experiments."""

from __future__ import annotations

import math
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ExperimentKind(str, Enum):
    """Experiments the lab can run."""

    IMPROVING = "improving"
    MINOR_ARC = "minorArc"
    JUMP_COROLLARY = "jumpCorollary"
    VARIATIONAL_RATIO = "variationalRatio"
    MAXIMAL_RATIO = "maximalRatio"
    SYMBOL_COMPARISON = "symbolComparison"
    SHARPNESS = "sharpness"
    EXP_SUM_VARIATION = "expSumVariation"
    SHIFTED_SQUARE_PROBE = "shiftedSquareProbe"


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ImprovingParams(_Params):
    """Improving estimate for the linear smoothing average B_N.

    ``q = None`` stands for the sup norm.
    """

    p: float = Field(default=1.0, ge=1.0)
    q: Optional[float] = Field(default=None, ge=1.0)
    k_min: int = Field(default=4, ge=1)
    k_max: int = Field(default=14, ge=2, le=20)
    support: int = Field(default=32, ge=1)
    profile_max: int = Field(default=2**16, ge=2)
    slope_k_min: int = Field(default=6, ge=1)
    slope_k_max: int = Field(default=14, ge=2, le=20)
    slope_target: float = -1.0
    slope_tolerance: float = Field(default=0.1, gt=0)
    growth_bound: float = Field(default=2.0, gt=1)

    @model_validator(mode="after")
    def _ordered(self) -> ImprovingParams:
        if self.q is not None and self.q < self.p:
            raise ValueError(f"need p <= q, got p={self.p}, q={self.q}")
        if self.k_min >= self.k_max or self.slope_k_min + 2 > self.slope_k_max:
            raise ValueError("exponent ranges are too short")
        return self

    @property
    def gain(self) -> float:
        """``1/p - 1/q``."""
        return 1.0 / self.p - (0.0 if self.q is None else 1.0 / self.q)


class MinorArcParams(_Params):
    """High-pass one input and measure the decay of the upper-half average."""

    N: int = Field(default=4096, ge=64)
    l_min: int = Field(default=1, ge=0)
    l_max: int = Field(default=8, ge=1)
    trials: int = Field(default=3, ge=1)
    max_slope: float = -0.1
    slack: float = Field(default=0.1, ge=0)

    @model_validator(mode="after")
    def _levels(self) -> MinorArcParams:
        if self.l_max - self.l_min < 2:
            raise ValueError("need at least three arc levels")
        return self


class JumpCorollaryParams(_Params):
    """Jump counts of exponential partial sums over a lacunary set."""

    lam: float = Field(default=2.0, gt=1.0)
    pairs: int = Field(default=50, ge=1)
    cap: int = Field(default=2**20, ge=2)
    deltas: List[float] = Field(default_factory=lambda: [2.0**-k for k in range(1, 7)])
    r: float = Field(default=3.0, gt=2.0)
    oracle_delta: float = Field(default=0.25, gt=0)
    max_slope: float = 2.5

    @field_validator("deltas")
    @classmethod
    def _decreasing(cls, deltas: List[float]) -> List[float]:
        if len(deltas) < 3 or any(d <= 0 for d in deltas):
            raise ValueError("need at least three positive jump sizes")
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("jump sizes must be strictly decreasing")
        return deltas


class VariationalRatioParams(_Params):
    """l^p norm of pointwise r-variation over a lacunary set of scales."""

    trials: int = Field(default=100, ge=1)
    p1: float = Field(default=2.0, gt=1.0)
    p2: float = Field(default=2.0, gt=1.0)
    r: float = Field(default=3.0, gt=2.0)
    lam: float = Field(default=2.0, gt=1.0)
    support: int = Field(default=256, ge=1, le=256)
    n_min: int = Field(default=4, ge=1)
    cap_small: int = Field(default=2**11, ge=2)
    cap_large: int = Field(default=2**12, ge=4)
    max_growth: float = Field(default=2.0, gt=1.0)

    @model_validator(mode="after")
    def _caps(self) -> VariationalRatioParams:
        if not self.n_min <= self.cap_small < self.cap_large:
            raise ValueError("need n_min <= cap_small < cap_large")
        return self

    @property
    def p(self) -> float:
        return 1.0 / (1.0 / self.p1 + 1.0 / self.p2)

    @property
    def probe_exponents(self) -> List[float]:
        """r values just around 2 and around max(p1', p2')."""
        dual = max(self.p1 / (self.p1 - 1.0), self.p2 / (self.p2 - 1.0))
        return sorted({1.9, 2.1, round(dual - 0.1, 12), round(dual + 0.1, 12)})


class MaximalRatioParams(_Params):
    """l^p norm of the maximal average over all N up to a cap."""

    trials: int = Field(default=20, ge=1)
    p1: float = Field(default=2.0, gt=1.0)
    p2: float = Field(default=2.0, gt=1.0)
    support: int = Field(default=64, ge=1)
    cap_small: int = Field(default=2**9, ge=2)
    cap_large: int = Field(default=2**10, ge=4)
    max_growth: float = Field(default=2.0, gt=1.0)

    @model_validator(mode="after")
    def _caps(self) -> MaximalRatioParams:
        if self.cap_small >= self.cap_large:
            raise ValueError("need cap_small < cap_large")
        return self

    @property
    def p(self) -> float:
        return 1.0 / (1.0 / self.p1 + 1.0 / self.p2)


class SymbolComparisonParams(_Params):
    """Discrete against continuous symbol on the principal arc."""

    k_min: int = Field(default=8, ge=2)
    k_max: int = Field(default=14, le=20)
    points: int = Field(default=9, ge=2)
    l1: int = 1
    l2: int = 1
    c0: float = Field(default=1.0, gt=0)
    use_schedule: bool = False
    slope_low: float = -0.7
    slope_high: float = -0.3
    oracle_draws: int = Field(default=100, ge=1)
    oracle_max_exponent: int = Field(default=10, ge=1, le=14)
    oracle_tolerance: float = Field(default=1e-9, gt=0)

    @model_validator(mode="after")
    def _range(self) -> SymbolComparisonParams:
        if self.k_max - self.k_min < 2:
            raise ValueError("need at least three scales")
        if self.slope_low >= self.slope_high:
            raise ValueError("empty slope window")
        return self

    def arc_levels(self, N: int) -> Tuple[int, int]:
        """``(l1, l2)``, from ``floor(c0 log log N)`` when the schedule is on."""
        if not self.use_schedule:
            return self.l1, self.l2
        level = max(1, math.floor(self.c0 * math.log(math.log(N))))
        return level, level


class SharpnessParams(_Params):
    """Equidistribution of the average on a cyclic rotation system."""

    fibonacci_index: int = Field(default=16, ge=16, le=18)
    mus: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])
    checked_mus: List[float] = Field(default_factory=lambda: [0.2, 0.1])
    tolerance: float = Field(default=0.15, gt=0)
    monotone_slack: float = Field(default=0.01, ge=0)
    exponents: List[float] = Field(default_factory=lambda: [0.4, 0.5, 0.6])

    @field_validator("mus", "checked_mus")
    @classmethod
    def _densities(cls, mus: List[float]) -> List[float]:
        if not mus or any(not 0 < m <= 1 for m in mus):
            raise ValueError("densities must lie in (0, 1]")
        return mus


class ExpSumVariationParams(_Params):
    """r-variation of exponential partial sums over a lacunary set."""

    grid: int = Field(default=32, ge=1)
    random_pairs: int = Field(default=100, ge=0)
    r: float = Field(default=3.0, gt=2.0)
    lam: float = Field(default=2.0, gt=1.0)
    cap_small: int = Field(default=2**16, ge=2)
    cap_large: int = Field(default=2**18, ge=4)
    max_growth: float = Field(default=1.5, gt=1.0)
    oracle_scales: int = Field(default=19, ge=2, le=19)
    oracle_tolerance: float = Field(default=1e-9, gt=0)

    @model_validator(mode="after")
    def _caps(self) -> ExpSumVariationParams:
        if self.cap_small >= self.cap_large:
            raise ValueError("need cap_small < cap_large")
        return self


class ShiftedSquareProbeParams(_Params):
    """Growth of the shifted square function in the shift bound K."""

    ks: List[int] = Field(default_factory=lambda: [2, 8, 32])
    support: int = Field(default=256, ge=1)
    lam: float = Field(default=2.0, gt=1.0)
    scale_max: int = Field(default=2**12, ge=2)
    eta_scale: float = Field(default=0.25, gt=0, le=0.25)
    A: float = Field(default=1.0, gt=0)
    d: float = Field(default=1.0, gt=0)
    trials: int = Field(default=4, ge=1)
    max_slope: float = 1.5
    identity_tolerance: float = Field(default=1e-10, gt=0)

    @field_validator("ks")
    @classmethod
    def _shift_bounds(cls, ks: List[int]) -> List[int]:
        if len(ks) < 2 or any(k < 1 for k in ks) or ks != sorted(set(ks)):
            raise ValueError("need at least two increasing positive shift bounds")
        return ks


PARAMS_MODELS: Dict[ExperimentKind, Type[_Params]] = {
    ExperimentKind.IMPROVING: ImprovingParams,
    ExperimentKind.MINOR_ARC: MinorArcParams,
    ExperimentKind.JUMP_COROLLARY: JumpCorollaryParams,
    ExperimentKind.VARIATIONAL_RATIO: VariationalRatioParams,
    ExperimentKind.MAXIMAL_RATIO: MaximalRatioParams,
    ExperimentKind.SYMBOL_COMPARISON: SymbolComparisonParams,
    ExperimentKind.SHARPNESS: SharpnessParams,
    ExperimentKind.EXP_SUM_VARIATION: ExpSumVariationParams,
    ExperimentKind.SHIFTED_SQUARE_PROBE: ShiftedSquareProbeParams,
}


class ExperimentConfig(BaseModel):
    """One experiment: its kind, a mandatory seed and kind-specific parameters."""

    kind: ExperimentKind
    seed: int = Field(ge=0, lt=2**64)
    parameters: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _validate_parameters(self) -> ExperimentConfig:
        PARAMS_MODELS[self.kind](**self.parameters)
        return self

    @property
    def params(self) -> Any:
        """Parameters validated against the model for this kind."""
        return PARAMS_MODELS[self.kind](**self.parameters)


class Series(BaseModel):
    """Measured points ``(x, y)`` of one series."""

    x: List[float] = Field(default_factory=list)
    y: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _paired(self) -> Series:
        if len(self.x) != len(self.y):
            raise ValueError(
                f"x and y differ in length: {len(self.x)} != {len(self.y)}"
            )
        return self

    def __len__(self) -> int:
        return len(self.x)


class ScalingFit(BaseModel):
    """Least-squares fit of ``log y`` against ``log x`` (or against x)."""

    slope: float
    intercept: float
    residual: float = Field(ge=0)
    semilog: bool = False


class ExperimentReport(BaseModel):
    """Everything one experiment measured and decided."""

    config: ExperimentConfig
    series: Dict[str, Series] = Field(default_factory=dict)
    fits: Dict[str, ScalingFit] = Field(default_factory=dict)
    constants: Dict[str, float] = Field(default_factory=dict)
    passes: Dict[str, bool] = Field(default_factory=dict)
    informational: List[str] = Field(default_factory=list)
    duration_seconds: float = Field(default=0.0, ge=0)
    created_at: datetime = Field(default_factory=datetime.now)

    @property
    def kind(self) -> ExperimentKind:
        return self.config.kind

    @property
    def passed(self) -> bool:
        """True iff every pass flag is true."""
        return all(self.passes.values())

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> ExperimentReport:
        return cls.model_validate_json(text)
