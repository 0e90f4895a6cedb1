"""Tests for run-configuration parsing and validation."""

import pytest

from odhall.domain.entities import (
    HallMhdParams,
    ModelKind,
    OldroydParams,
)
from odhall.infrastructure.storage import (
    load_config,
    parse_config,
    render_config,
)
from odhall.schemas import config_defaults
from odhall.services.run_service import RunService
from odhall.shared.exceptions import (
    CoercivityError,
    ConfigurationError,
    StorageError,
)

pytestmark = pytest.mark.unit

MINIMAL = """\
model = oldroyd
grid.n = 16
time.t_end = 1.0
"""


def _key_of(text: str) -> str:
    with pytest.raises(ConfigurationError) as exc_info:
        parse_config(text)
    return exc_info.value.details["key"]


class TestParseConfig:
    """INI text to RunConfig."""

    def test_minimal(self):
        config = parse_config(MINIMAL)
        assert config.model == ModelKind.OLDROYD
        assert config.grid.n == 16
        assert config.grid.L == pytest.approx(200.0)
        assert config.time.dt == pytest.approx(0.05)
        assert config.n_steps == 20
        assert config.params.hall is True
        assert config.fit.windows == ()

    def test_sections_and_dotted_keys_agree(self):
        sectioned = "model = hallmhd\n\n[grid]\nn = 32\nL = 50\n\n[time]\nt_end = 2\ndt = 0.01\n"
        dotted = "model = hallmhd\ngrid.n = 32\ngrid.L = 50\ntime.t_end = 2\ntime.dt = 0.01\n"
        assert parse_config(sectioned) == parse_config(dotted)

    def test_odd_grid(self):
        assert _key_of(MINIMAL.replace("grid.n = 16", "grid.n = 63")) == "grid.n"

    def test_unknown_key(self):
        assert _key_of(MINIMAL + "params.viscosity = 2\n") == "params.viscosity"

    def test_missing_key(self):
        assert _key_of("model = oldroyd\ngrid.n = 16\n") == "time"

    def test_missing_key_inside_section(self):
        assert _key_of("model = oldroyd\ngrid.n = 16\ntime.dt = 0.1\n") == "time.t_end"

    def test_unknown_model(self):
        assert _key_of(MINIMAL.replace("oldroyd", "euler")) == "model"

    def test_duplicate_key(self):
        text = MINIMAL + "[grid]\nn = 32\n"
        assert _key_of(text) == "grid.n"

    def test_nested_key_too_deep(self):
        assert _key_of(MINIMAL + "grid.n.x = 3\n") == "grid.n.x"

    @pytest.mark.parametrize(
        "line, key",
        [
            ("params.b = 1.5", "params.b"),
            ("params.gamma = 0.5", "params.gamma"),
            ("params.rho_floor = 1.0", "params.rho_floor"),
            ("params.m_sigma = 0.75", "params.m_sigma"),
            ("time.dt = 0", "time.dt"),
            ("ic.fields = rho, p", "ic.fields"),
            ("params.hall = maybe", "params.hall"),
            ("fit.windows = 5:1", "fit.windows"),
        ],
    )
    def test_value_constraints(self, line, key):
        assert _key_of(MINIMAL + line + "\n") == key

    def test_switches(self):
        config = parse_config(
            MINIMAL + "params.hall = off\nrun.nonlinear = no\nic.divfree = on\n"
        )
        assert config.params.hall is False
        assert config.run.nonlinear is False
        assert config.ic.divfree is True

    def test_lists(self):
        config = parse_config(
            MINIMAL
            + "fit.windows = 5:150, 20:100\noutput.snapshot_times = 0, 0.5, 1\nic.fields = rho,u\n"
        )
        assert config.fit.windows == ((5.0, 150.0), (20.0, 100.0))
        assert config.output.snapshot_times == (0.0, 0.5, 1.0)
        assert config.ic.fields == ("rho", "u")

    def test_cutoff_against_grid(self):
        assert _key_of(MINIMAL + "grid.L = 6.283185307179586\nic.cutoff = 20\n") == "ic.cutoff"

    @pytest.mark.parametrize("n", [16, 32, 44])
    def test_default_cutoff_fits_small_grids(self, n):
        config = parse_config(MINIMAL.replace("grid.n = 16", f"grid.n = {n}"))
        assert config.ic.cutoff == pytest.approx(config.build_grid().max_wavenumber)
        assert config.ic.cutoff < 1.0

    def test_default_cutoff_on_large_grid(self):
        config = parse_config(MINIMAL.replace("grid.n = 16", "grid.n = 256"))
        assert config.ic.cutoff == 1.0

    def test_model_params(self):
        oldroyd = parse_config(MINIMAL + "params.b = 0.4\n").model_params()
        assert oldroyd == OldroydParams(gamma=1.5, b=0.4, rho_floor=0.5)
        hall = parse_config(
            MINIMAL.replace("oldroyd", "hallmhd") + "params.hall = off\n"
        ).model_params()
        assert hall == HallMhdParams(gamma=1.5, rho_floor=0.5, hall=False)

    def test_density_weight(self):
        assert parse_config(MINIMAL + "params.gamma = 2\n").density_weight_value == 2.0
        unit = parse_config(MINIMAL + "params.density_weight = unit\n")
        assert unit.density_weight_value == 1.0


class TestRenderConfig:
    """Rendering back to INI text."""

    def test_round_trip(self):
        config = parse_config(
            MINIMAL
            + "params.hall = off\nfit.windows = 5:150\noutput.snapshot_times = 0, 1\n"
            + "ic.fields = rho, tau\nic.energy_budget = 0.5\n"
        )
        assert parse_config(render_config(config)) == config

    def test_round_trip_of_defaults(self):
        config = parse_config(MINIMAL)
        assert parse_config(render_config(config)) == config


class TestLoadConfig:
    """Reading config files."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(StorageError):
            load_config(tmp_path / "absent.ini")

    def test_reads_file(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(MINIMAL, encoding="utf-8")
        assert load_config(path).grid.n == 16


class TestRunValidation:
    """Checks made when a run is set up."""

    def test_eta_above_threshold(self):
        with pytest.raises(CoercivityError):
            RunService(parse_config(MINIMAL + "grid.L = 25.132741228718345\nparams.eta = 5\n"))

    def test_snapshot_time_outside_run(self):
        with pytest.raises(ConfigurationError) as exc_info:
            RunService(parse_config(MINIMAL + "output.snapshot_times = 0, 3\n"))
        assert exc_info.value.details["key"] == "output.snapshot_times"

    def test_defaults_listing(self):
        rows = {key: default for key, default, _ in config_defaults()}
        assert rows["model"] == "required"
        assert rows["grid.n"] == "required"
        assert rows["time.dt"] == "0.05"
        assert rows["params.hall"] == "on"
        assert rows["output.snapshot_times"] == "none"
