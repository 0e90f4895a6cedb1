"""Run orchestration.

A run generates the initial data, precomputes the propagators and advances
the state to t_end, emitting one diagnostics row every ``stride`` steps and
snapshots at the configured times. Output goes to one directory per run:
``series.csv``, the snapshots and a copy of the configuration.
"""

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import (
    dataclass,
    field,
)
from pathlib import Path
from typing import (
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from tqdm import tqdm

from odhall.core.config import settings
from odhall.core.logging import (
    logger,
    run_context,
)
from odhall.domain.entities import ModelState
from odhall.domain.services import (
    ModelInterface,
    build_model,
)
from odhall.domain.services.spectral import SpectralWorkspace
from odhall.infrastructure.storage import (
    SeriesWriter,
    load_config,
    render_config,
    write_snapshot,
)
from odhall.schemas import (
    RunConfig,
    TimeSeriesRecord,
)
from odhall.services.diagnostics import (
    DiagnosticsEngine,
    check_saturation,
    energy_rate,
)
from odhall.services.initial_data import generate
from odhall.services.integrator import (
    PropagatorTable,
    precompute_propagators,
    step,
)
from odhall.shared.constants import (
    CONFIG_COPY_FILENAME,
    ENERGY_BALANCE_REL_TOL,
    EXIT_OK,
    SERIES_FILENAME,
    snapshot_filename,
)
from odhall.shared.exceptions import (
    ConfigurationError,
    OdhallError,
    OutputWriteError,
    SmallnessBudgetError,
)


@dataclass
class RunResult:
    """What a finished run leaves behind."""

    out_dir: Optional[Path]
    records: List[TimeSeriesRecord]
    final_state: ModelState
    snapshots: List[Path] = field(default_factory=list)
    steps: int = 0


class RunService:
    """Sets up and executes one run of a validated configuration."""

    def __init__(self, config: RunConfig, config_text: Optional[str] = None):
        """Initialize the run.

        Args:
            config: Validated run configuration
            config_text: Verbatim config file text, copied into the output directory

        Raises:
            CoercivityError: If params.eta exceeds the coercivity threshold
            ConfigurationError: If a snapshot time lies outside [0, t_end]
        """
        self.config = config
        self.config_text = config_text if config_text is not None else render_config(config)
        self.grid = config.build_grid()
        self.params = config.model_params()
        self.workspace = SpectralWorkspace(self.grid)
        self.model: ModelInterface = build_model(
            config.model, self.grid, self.params, self.workspace
        )
        self.engine = DiagnosticsEngine(
            self.grid,
            eta=config.params.eta,
            density_weight=config.density_weight_value,
            c2=config.params.c2,
            m_sigma=config.params.m_sigma,
        )
        self.n_steps = config.n_steps
        self.snapshot_steps = self._snapshot_steps()
        self._table: Optional[PropagatorTable] = None

    def _snapshot_steps(self) -> List[int]:
        times = self.config.output.snapshot_times
        if times is None:
            return sorted({0, self.n_steps})
        steps = set()
        for t in times:
            if not 0 <= t <= self.config.time.t_end:
                raise ConfigurationError(
                    "output.snapshot_times", "must lie within [0, time.t_end]", t
                )
            steps.add(int(round(t / self.config.time.dt)))
        return sorted(steps)

    @property
    def table(self) -> PropagatorTable:
        if self._table is None:
            self._table = precompute_propagators(self.grid, self.config.time.dt, self.model)
        return self._table

    def initial_state(self) -> ModelState:
        """Initial data, checked against the smallness budget when one is set.

        Raises:
            AmplitudeTooLargeError: If 1 + rho would drop below the density floor
            SmallnessBudgetError: If E0(0) exceeds ic.energy_budget
        """
        state = generate(self.config.ic, self.grid, self.config.model, self.params, self.workspace)
        energy = self.engine.energy(state, 0)
        logger.info(
            "initial_energy",
            E0=energy,
            budget=self.config.ic.energy_budget,
            eta=self.config.params.eta,
            eta_max=self.engine.eta_max,
        )
        budget = self.config.ic.energy_budget
        if budget is not None and energy > budget:
            raise SmallnessBudgetError(energy, budget)
        return state

    def check_energy_balance(self, state: ModelState, t: float) -> None:
        """Warn when dE_sigma/dt + D_sigma > 0 at the current instant."""
        for sigma in (0, 1):
            balance = energy_rate(
                state,
                sigma,
                self.config.params.eta,
                self.config.density_weight_value,
                nonlinear=self.config.run.nonlinear,
                model=self.model,
            )
            scale = self.engine.energy(state, sigma)
            if balance.balance > ENERGY_BALANCE_REL_TOL * scale:
                logger.warning(
                    "energy_balance_violated",
                    t=t,
                    sigma=sigma,
                    dE_dt=balance.dE_dt,
                    D=balance.D,
                    E=scale,
                )

    def simulate(self) -> Iterator[Tuple[int, float, ModelState]]:
        """Yield (step index, time, state) from the initial data to t_end."""
        dt = self.config.time.dt
        rhs_fn = self.model.rhs_array if self.config.run.nonlinear else None
        state = self.initial_state()
        yield 0, 0.0, state
        for k in range(self.n_steps):
            state = step(state, self.table, rhs_fn, t=k * dt, step_index=k)
            yield k + 1, (k + 1) * dt, state

    def run(self, out_dir: Optional[Union[str, Path]] = None) -> RunResult:
        """Execute the run and write its output directory.

        Raises:
            BlowUpError: If the state stops being finite
            VacuumProximityError: If 1 + rho drops below the density floor
            OutputWriteError: If the output directory cannot be written
        """
        out = Path(out_dir) if out_dir is not None else self.config.output.dir
        with run_context(model=self.config.model.value, n=self.grid.n, out_dir=str(out)):
            return self._execute(out)

    def _execute(self, out: Path) -> RunResult:
        for window in self.config.fit.windows:
            check_saturation(window, self.grid, self.config.time.t_end)
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / CONFIG_COPY_FILENAME).write_text(self.config_text, encoding="utf-8")
        except OSError as e:
            raise OutputWriteError(f"Cannot prepare output directory: {e}", out)

        logger.info(
            "run_started",
            L=self.grid.box_length,
            dt=self.config.time.dt,
            t_end=self.config.time.t_end,
            nonlinear=self.config.run.nonlinear,
        )
        stride = self.config.time.stride
        records: List[TimeSeriesRecord] = []
        snapshots: List[Path] = []
        state = None
        progress = tqdm(
            total=self.n_steps,
            file=sys.stderr,
            disable=not settings.SHOW_PROGRESS,
            desc=f"{self.config.model.value} n={self.grid.n}",
            unit="step",
        )
        with progress, SeriesWriter(out / SERIES_FILENAME) as writer:
            for k, t, state in self.simulate():
                if k:
                    progress.update(1)
                if k in self.snapshot_steps:
                    snapshots.append(write_snapshot(out / snapshot_filename(t), state, t))
                if k % stride:
                    continue
                self.model.density_samples(state.rho.coeffs, t)
                record = self.engine.measure(state, t)
                self.check_energy_balance(state, t)
                writer.write(record)
                records.append(record)
                progress.set_postfix_str(f"E0={record.E0:.3e}")

        logger.info(
            "run_finished",
            rows=len(records),
            snapshots=len(snapshots),
            steps=self.n_steps,
        )
        return RunResult(
            out_dir=out,
            records=records,
            final_state=state,
            snapshots=snapshots,
            steps=self.n_steps,
        )


def run(
    config: RunConfig,
    out_dir: Optional[Union[str, Path]] = None,
    config_text: Optional[str] = None,
) -> RunResult:
    return RunService(config, config_text).run(out_dir)


def run_path(path: Union[str, Path]) -> int:
    """Run one config file; returns the process exit code."""
    with run_context(config=str(path)):
        try:
            config = load_config(path)
            run(config, config_text=Path(path).read_text(encoding="utf-8"))
        except OdhallError as e:
            logger.error("run_failed", **e.to_dict())
            return e.exit_code
    return EXIT_OK


def sweep(paths: Sequence[Union[str, Path]], jobs: int = 1) -> List[Tuple[str, int]]:
    """Run independent configs in separate processes.

    Raises:
        ConfigurationError: If two configs share an output directory
    """
    seen = {}
    for path in paths:
        out = load_config(path).output.dir.resolve()
        if out in seen:
            raise ConfigurationError(
                "output.dir", f"shared by {seen[out]} and {path}; sweep members need their own"
            )
        seen[out] = str(path)

    names = [str(path) for path in paths]
    logger.info("sweep_started", configs=len(names), jobs=jobs)
    with ProcessPoolExecutor(max_workers=max(1, jobs)) as pool:
        codes = list(pool.map(run_path, names))
    return list(zip(names, codes))
