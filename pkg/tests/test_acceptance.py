"""Desk-scale decay runs.

Large torus (n = 256, L = 200), dt = 0.05, flat low-frequency initial data,
decay exponents fitted over t in [5, 150]. Each run takes a few minutes.
"""

import numpy as np
import pytest

from odhall.cli.main import main
from odhall.domain.services.spectral import divergence
from odhall.infrastructure.storage import (
    parse_config,
    read_snapshot,
)
from odhall.services.diagnostics import (
    derived_series,
    energy_inequality_check,
    energy_rate,
    fit_decay,
    tracker_series,
)
from odhall.services.run_service import RunService
from odhall.shared.constants import (
    EXIT_OK,
    INEQUALITY_REL_TOL,
)

pytestmark = [pytest.mark.slow, pytest.mark.acceptance]

WINDOW = (5.0, 150.0)

DESK_CONFIG = """\
model = {model}

[grid]
n = 256
L = 200

[time]
dt = 0.05
t_end = {t_end}
stride = 10

[ic]
amplitude = {amplitude}

[run]
nonlinear = {nonlinear}
"""


def _config(model, nonlinear, amplitude=1e-2, t_end=150):
    text = DESK_CONFIG.format(
        model=model, nonlinear="on" if nonlinear else "off", amplitude=amplitude, t_end=t_end
    )
    return parse_config(text), text


def _desk_run(tmp_path_factory, model, nonlinear):
    config, text = _config(model, nonlinear)
    out = tmp_path_factory.mktemp(f"{model}-{'nl' if nonlinear else 'lin'}")
    return RunService(config, config_text=text).run(out)


def _exponent(records, column):
    return fit_decay(derived_series(records, column), WINDOW, column).exponent


@pytest.fixture(scope="module")
def oldroyd_linear(tmp_path_factory):
    return _desk_run(tmp_path_factory, "oldroyd", nonlinear=False)


@pytest.fixture(scope="module")
def oldroyd_nonlinear(tmp_path_factory):
    return _desk_run(tmp_path_factory, "oldroyd", nonlinear=True)


@pytest.fixture(scope="module")
def hall_linear(tmp_path_factory):
    return _desk_run(tmp_path_factory, "hallmhd", nonlinear=False)


@pytest.fixture(scope="module")
def hall_nonlinear(tmp_path_factory):
    return _desk_run(tmp_path_factory, "hallmhd", nonlinear=True)


class TestOldroydDecay:
    """(rho, u) like (1+t)^-1/2; tau and the gradients like (1+t)^-1."""

    def test_linear_exponents(self, oldroyd_linear):
        records = oldroyd_linear.records
        assert _exponent(records, "l2_rho_u") == pytest.approx(-0.5, abs=0.10)
        assert _exponent(records, "l2_extra") == pytest.approx(-1.0, abs=0.15)
        assert _exponent(records, "h1_grad") == pytest.approx(-1.0, abs=0.15)

    def test_nonlinear_exponents(self, oldroyd_nonlinear):
        records = oldroyd_nonlinear.records
        assert _exponent(records, "l2_rho_u") == pytest.approx(-0.5, abs=0.15)
        assert _exponent(records, "l2_extra") == pytest.approx(-1.0, abs=0.15)
        assert _exponent(records, "h1_grad") == pytest.approx(-1.0, abs=0.15)

    def test_linear_energy_balance(self, oldroyd_linear):
        state = oldroyd_linear.final_state
        for sigma in (0, 1):
            rate = energy_rate(state, sigma, eta=0.01, density_weight=1.5, nonlinear=False)
            assert rate.balance <= 1e-10 * (abs(rate.dE_dt) + rate.D)


class TestHallMhdDecay:
    """(rho, u, B) like (1+t)^-1/2; the gradients like (1+t)^-1."""

    def test_linear_exponents(self, hall_linear):
        records = hall_linear.records
        assert _exponent(records, "l2_all") == pytest.approx(-0.5, abs=0.10)
        assert _exponent(records, "h1_grad") == pytest.approx(-1.0, abs=0.15)

    def test_nonlinear_exponents(self, hall_nonlinear):
        records = hall_nonlinear.records
        assert _exponent(records, "l2_all") == pytest.approx(-0.5, abs=0.10)
        assert _exponent(records, "h1_grad") == pytest.approx(-1.0, abs=0.15)

    def test_magnetic_field_stays_divergence_free(self, hall_nonlinear):
        for path in hall_nonlinear.snapshots:
            state, _ = read_snapshot(path)
            B = state.extra
            scale = np.max(state.grid.xi_abs * np.abs(B.stack()))
            assert np.max(np.abs(divergence(B).coeffs)) <= 1e-10 * scale


class TestRunRecords:
    """Tracker columns and the stored series of the desk runs."""

    @pytest.mark.parametrize("run_name", ["oldroyd_nonlinear", "hall_nonlinear"])
    def test_trackers_are_running_sups(self, run_name, request):
        records = request.getfixturevalue(run_name).records
        recomputed = tracker_series(records)
        assert [tr.n for tr in recomputed] == [r.n_tracker for r in records]
        assert [tr.m for tr in recomputed] == [r.m_tracker for r in records]
        assert len(records) == 301

    @pytest.mark.parametrize("sigma", [0, 1])
    @pytest.mark.parametrize("run_name", ["oldroyd_nonlinear", "hall_nonlinear"])
    def test_energy_inequality(self, run_name, sigma, request):
        records = request.getfixturevalue(run_name).records
        threshold = INEQUALITY_REL_TOL * records[0].value(f"E{sigma}") / 0.05
        assert energy_inequality_check(records, sigma, "min") <= threshold

    @pytest.mark.parametrize("run_name", ["oldroyd_nonlinear", "hall_nonlinear"])
    def test_energy_decays_overall(self, run_name, request):
        records = request.getfixturevalue(run_name).records
        assert records[-1].E0 < 0.1 * records[0].E0
        assert records[-1].E1 < records[0].E1


class TestLinearSemigroup:
    """linear-verify at t = 10 on the desk grid."""

    @pytest.mark.parametrize("model", ["oldroyd", "hallmhd"])
    def test_linear_verify(self, model, tmp_path, capsys):
        _, text = _config(model, nonlinear=False, t_end=10)
        path = tmp_path / f"{model}.ini"
        path.write_text(text, encoding="utf-8")
        assert main(["linear-verify", str(path)]) == EXIT_OK
        assert "t=10" in capsys.readouterr().out
