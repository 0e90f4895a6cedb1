"""Diagnostics records and analysis results."""

from typing import (
    ClassVar,
    Dict,
    List,
    Tuple,
)

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
)

from odhall.shared.constants import (
    CSV_COLUMNS,
    FLOAT_FORMAT,
)


class TimeSeriesRecord(BaseModel):
    """One diagnostics row. All entries must be finite."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")

    t: float = Field(..., ge=0)
    l2_rho: float
    l2_u: float
    l2_extra: float = Field(..., description="||tau||_L2 or ||B||_L2")
    h1_grad: float
    E0: float
    E1: float
    D0: float
    D1: float
    besov_m1: float
    besov_mhalf: float
    lowfreq_S: float
    lowfreq_S0: float
    s_radius: float
    n_tracker: float
    m_tracker: float

    def to_row(self) -> List[str]:
        return [format(getattr(self, name), FLOAT_FORMAT) for name in CSV_COLUMNS]

    @classmethod
    def from_row(cls, row: Dict[str, str]) -> "TimeSeriesRecord":
        return cls(**{name: float(row[name]) for name in CSV_COLUMNS})

    def value(self, column: str) -> float:
        return float(getattr(self, column))


class FitResult(BaseModel):
    """Least-squares fit of log(value) against log(1 + t)."""

    model_config = ConfigDict(frozen=True)

    column: str = Field("value", description="Fitted series")
    exponent: float = Field(..., description="Slope of log value vs log(1+t)")
    intercept: float
    residual_rms: float = Field(..., ge=0)
    window: Tuple[float, float]
    samples: int = Field(..., ge=0)

    CSV_HEADER: ClassVar[Tuple[str, ...]] = ("column", "exponent", "intercept", "residual_rms", "t0", "t1", "samples")

    def to_row(self) -> List[str]:
        return [
            self.column,
            format(self.exponent, FLOAT_FORMAT),
            format(self.intercept, FLOAT_FORMAT),
            format(self.residual_rms, FLOAT_FORMAT),
            format(self.window[0], FLOAT_FORMAT),
            format(self.window[1], FLOAT_FORMAT),
            str(self.samples),
        ]


class RateCheck(BaseModel):
    """Measured decay exponent of one series against its target."""

    model_config = ConfigDict(frozen=True)

    column: str
    target: float
    kind: str = Field("rate", description="'rate' (|fit - target| <= tol) or 'bound' (fit <= target + tol)")
    fit: FitResult
    tolerance: float
    passed: bool

    CSV_HEADER: ClassVar[Tuple[str, ...]] = ("column", "kind", "target", "exponent", "tolerance", "passed")

    def to_row(self) -> List[str]:
        return [
            self.column,
            self.kind,
            format(self.target, FLOAT_FORMAT),
            format(self.fit.exponent, FLOAT_FORMAT),
            format(self.tolerance, FLOAT_FORMAT),
            "pass" if self.passed else "fail",
        ]
