"""Run configuration schema.

The INI run file is flattened to nested sections and validated here. Each
section is its own model; unknown keys are rejected everywhere.
"""

from pathlib import Path
from typing import (
    Annotated,
    List,
    Literal,
    Optional,
    Tuple,
)

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    field_validator,
)

from odhall.domain.entities import (
    Grid,
    HallMhdParams,
    ModelKind,
    ModelParams,
    OldroydParams,
)
from odhall.shared.constants import (
    DEFAULT_AMPLITUDE,
    DEFAULT_B,
    DEFAULT_BOX_LENGTH,
    DEFAULT_C2,
    DEFAULT_CUTOFF,
    DEFAULT_DT,
    DEFAULT_ETA,
    DEFAULT_GAMMA,
    DEFAULT_M_SIGMA,
    DEFAULT_RHO_FLOOR,
    DEFAULT_SEED,
    DEFAULT_STRIDE,
    DEFAULT_TAIL_EXPONENT,
    M_TRACKER_COLUMNS,
)
from odhall.shared.utils import (
    parse_float_list,
    parse_switch,
    parse_window_list,
    split_list,
)

FIELD_GROUPS = ("rho", "u", "tau", "B")


def _switch(v):
    return parse_switch(v) if isinstance(v, str) else v


# on/off switch; also accepts real booleans
Switch = Annotated[bool, BeforeValidator(_switch)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Section):
    """Grid section."""

    n: int = Field(..., gt=0, description="Modes per dimension (even)")
    L: float = Field(DEFAULT_BOX_LENGTH, gt=0, description="Box side length")

    @field_validator("n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("must be an even positive integer")
        return v


class TimeConfig(_Section):
    """Time section."""

    dt: float = Field(DEFAULT_DT, gt=0, description="Fixed time step")
    t_end: float = Field(..., ge=0, description="Final time")
    stride: int = Field(DEFAULT_STRIDE, ge=1, description="Steps between diagnostics rows")


class ParamsConfig(_Section):
    """Physical and diagnostic parameters."""

    gamma: float = Field(DEFAULT_GAMMA, ge=1, description="Pressure exponent")
    b: float = Field(DEFAULT_B, ge=-1, le=1, description="Oldroyd g_b parameter")
    eta: float = Field(DEFAULT_ETA, ge=0, description="Cross-term weight of E_sigma")
    c2: float = Field(DEFAULT_C2, gt=0, description="Fourier-splitting constant C2")
    hall: Switch = Field(True, description="Hall term on/off")
    rho_floor: float = Field(DEFAULT_RHO_FLOOR, gt=0, lt=1, description="Density floor")
    density_weight: Literal["gamma", "unit"] = Field(
        "gamma", description="Weight of ||rho||^2 in E_sigma"
    )
    m_sigma: float = Field(DEFAULT_M_SIGMA, description="Besov index -m_sigma of the M tracker (1 or 0.5)")

    @field_validator("m_sigma")
    @classmethod
    def validate_m_sigma(cls, v: float) -> float:
        if v not in M_TRACKER_COLUMNS:
            raise ValueError(f"must be one of {sorted(M_TRACKER_COLUMNS)}")
        return v


class IcConfig(_Section):
    """Initial-data section."""

    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64, description="64-bit seed")
    amplitude: float = Field(DEFAULT_AMPLITUDE, ge=0, description="rms amplitude epsilon")
    cutoff: float = Field(DEFAULT_CUTOFF, gt=0, description="Flat-spectrum radius xi_c")
    tail_exponent: float = Field(DEFAULT_TAIL_EXPONENT, ge=0, description="High-frequency decay exponent")
    fields: Tuple[str, ...] = Field(FIELD_GROUPS, description="Populated unknowns")
    divfree: Switch = Field(True, description="Project B onto divergence-free fields")
    energy_budget: Optional[float] = Field(None, gt=0, description="Upper bound for E0(0)")

    @field_validator("fields", mode="before")
    @classmethod
    def parse_fields(cls, v):
        if isinstance(v, str):
            v = split_list(v)
        unknown = [name for name in v if name not in FIELD_GROUPS]
        if unknown:
            raise ValueError(f"unknown field(s) {unknown}; expected a subset of {FIELD_GROUPS}")
        return tuple(v)


class OutputConfig(_Section):
    """Output section."""

    dir: Path = Field(Path("output"), description="Output directory")
    snapshot_times: Optional[Tuple[float, ...]] = Field(
        None, description="Snapshot times (default: initial and final)"
    )

    @field_validator("snapshot_times", mode="before")
    @classmethod
    def parse_times(cls, v):
        if isinstance(v, str):
            return tuple(parse_float_list(v))
        return v


class RunSection(_Section):
    """Run switches."""

    nonlinear: Switch = Field(True, description="Nonlinear terms on/off")


class FitConfig(_Section):
    """Decay-fit windows."""

    windows: Tuple[Tuple[float, float], ...] = Field((), description="Fit windows t0:t1")

    @field_validator("windows", mode="before")
    @classmethod
    def parse_windows(cls, v):
        if isinstance(v, str):
            return tuple(parse_window_list(v))
        return v


class RunConfig(_Section):
    """Validated run configuration."""

    model: ModelKind
    grid: GridConfig
    time: TimeConfig
    params: ParamsConfig = Field(default_factory=ParamsConfig)
    ic: IcConfig = Field(default_factory=IcConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    run: RunSection = Field(default_factory=RunSection)
    fit: FitConfig = Field(default_factory=FitConfig)

    @property
    def n_steps(self) -> int:
        return int(round(self.time.t_end / self.time.dt))

    @property
    def density_weight_value(self) -> float:
        return self.params.gamma if self.params.density_weight == "gamma" else 1.0

    def build_grid(self) -> Grid:
        return Grid(self.grid.n, self.grid.L)

    def model_params(self) -> ModelParams:
        """Physical parameters of the configured model."""
        if self.model == ModelKind.OLDROYD:
            return OldroydParams(
                gamma=self.params.gamma, b=self.params.b, rho_floor=self.params.rho_floor
            )
        return HallMhdParams(
            gamma=self.params.gamma, rho_floor=self.params.rho_floor, hall=self.params.hall
        )


def config_defaults() -> List[Tuple[str, str, str]]:
    """(dotted key, default, description) for every key, used by --help."""
    rows = [("model", "required", "oldroyd or hallmhd")]
    sections = {
        "grid": GridConfig,
        "time": TimeConfig,
        "params": ParamsConfig,
        "ic": IcConfig,
        "output": OutputConfig,
        "run": RunSection,
        "fit": FitConfig,
    }
    for section, model in sections.items():
        for name, info in model.model_fields.items():
            default = "required" if info.is_required() else _format_default(info.default)
            rows.append((f"{section}.{name}", default, info.description or ""))
    return rows


def _format_default(value) -> str:
    if isinstance(value, bool):
        return "on" if value else "off"
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(
            ":".join(str(x) for x in item) if isinstance(item, tuple) else str(item) for item in value
        ) or "none"
    return str(value)
