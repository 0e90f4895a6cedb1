"""Tests for the exponential integrator and the propagator tables."""

import math

import numpy as np
import pytest

from odhall.domain.entities import (
    Grid,
    HallMhdParams,
    ModelKind,
    OldroydState,
)
from odhall.domain.services import (
    HallMhdModel,
    OldroydModel,
)
from odhall.services.integrator import (
    advance,
    integrate,
    linear_verify,
    phi_functions,
    precompute_propagators,
    step,
)
from odhall.shared.constants import LINEAR_VERIFY_TOL
from odhall.shared.exceptions import (
    BlowUpError,
    SpectralError,
    VacuumProximityError,
)
from tests.oracles import (
    random_state,
    taylor_expm,
)


def _mirror_rows(table):
    grid = table.grid
    position = np.full(grid.n * grid.n, -1, dtype=np.int64)
    position[table.modes] = np.arange(table.modes.size)
    return position[grid.neg_index[table.modes]]


class TestPhiFunctions:
    """e^z, phi1 and phi2 across the series radius."""

    @pytest.mark.unit
    def test_values_at_zero(self):
        e, p1, p2 = phi_functions(np.zeros(1))
        assert e[0] == 1.0
        assert p1[0] == pytest.approx(1.0)
        assert p2[0] == pytest.approx(0.5)

    @pytest.mark.unit
    @pytest.mark.parametrize("z", [0.3, -0.45 + 0.2j, 0.6, 2.0, -3.0 + 1.0j, -40.0])
    def test_closed_forms(self, z):
        _, p1, p2 = phi_functions(np.array([z]))
        em1 = np.expm1(z) if np.isrealobj(z) else np.exp(z) - 1.0
        assert p1[0] == pytest.approx(em1 / z, rel=1e-12)
        assert p2[0] == pytest.approx((em1 - z) / z**2, rel=1e-10)


class TestPropagatorTable:
    """Per-mode e^{hA}, h phi1(hA), h phi2(hA)."""

    @pytest.mark.unit
    def test_negative_step_rejected(self, grid16, oldroyd_params):
        with pytest.raises(SpectralError):
            precompute_propagators(grid16, -0.1, OldroydModel(grid16, oldroyd_params))

    @pytest.mark.unit
    def test_grid_mismatch_rejected(self, grid16, oldroyd_params):
        model = OldroydModel(Grid(16, 3.0), oldroyd_params)
        with pytest.raises(SpectralError):
            precompute_propagators(grid16, 0.1, model)

    @pytest.mark.unit
    def test_zero_step_is_identity(self, grid16, oldroyd_params, rng):
        model = OldroydModel(grid16, oldroyd_params)
        table = precompute_propagators(grid16, 0.0, model)
        state = random_state(ModelKind.OLDROYD, grid16, rng, oldroyd_params)
        np.testing.assert_allclose(advance(state.to_array(), table), state.to_array(), atol=1e-13)

    @pytest.mark.unit
    def test_magnetic_block_is_heat_kernel(self, grid16, hall_params):
        dt = 0.05
        table = precompute_propagators(grid16, dt, HallMhdModel(grid16, hall_params))
        sq = grid16.xi_sq.ravel()[table.modes]
        np.testing.assert_allclose(table.expo[:, 3, 3], np.exp(-dt * sq), atol=1e-12)
        np.testing.assert_allclose(table.expo[:, 4, 4], np.exp(-dt * sq), atol=1e-12)
        assert np.max(np.abs(table.expo[:, 3:, :3])) <= 1e-12
        assert np.max(np.abs(table.expo[:, 3, 4])) <= 1e-12

    @pytest.mark.unit
    def test_entries_match_series_exponential(self, grid16, oldroyd_params):
        dt = 0.05
        model = OldroydModel(grid16, oldroyd_params)
        table = precompute_propagators(grid16, dt, model)
        symbols = model.symbol_table()[table.modes]
        m = table.n_fields
        for row in range(0, table.modes.size, 7):
            block = np.zeros((3 * m, 3 * m), dtype=np.complex128)
            block[:m, :m] = dt * symbols[row]
            block[:m, m : 2 * m] = np.eye(m)
            block[m : 2 * m, 2 * m :] = np.eye(m)
            full = taylor_expm(block)
            assert np.max(np.abs(table.expo[row] - full[:m, :m])) <= 1e-10
            assert np.max(np.abs(table.phi1[row] - dt * full[:m, m : 2 * m])) <= 1e-10
            assert np.max(np.abs(table.phi2[row] - dt * full[:m, 2 * m :])) <= 1e-10

    @pytest.mark.unit
    def test_conjugate_symmetry_is_exact(self, grid16, oldroyd_params):
        table = precompute_propagators(grid16, 0.05, OldroydModel(grid16, oldroyd_params))
        mirror = _mirror_rows(table)
        for matrices in (table.expo, table.phi1, table.phi2):
            np.testing.assert_array_equal(matrices[mirror], matrices.conj())

    @pytest.mark.unit
    def test_forced_fallback_agrees(self, grid16, oldroyd_params):
        model = OldroydModel(grid16, oldroyd_params)
        eig = precompute_propagators(grid16, 0.05, model)
        pade = precompute_propagators(grid16, 0.05, model, cond_limit=1.0 + 1e-15)
        assert pade.fallback_count > eig.fallback_count
        np.testing.assert_allclose(pade.expo, eig.expo, atol=1e-11)
        np.testing.assert_allclose(pade.phi2, eig.phi2, atol=1e-11)


class TestStepping:
    """Single steps and error mapping."""

    @pytest.mark.integration
    @pytest.mark.parametrize("kind", [ModelKind.OLDROYD, ModelKind.HALLMHD])
    def test_linear_steps_match_semigroup(self, grid16, rng, kind, oldroyd_params, hall_params):
        params = oldroyd_params if kind == ModelKind.OLDROYD else hall_params
        model = (OldroydModel if kind == ModelKind.OLDROYD else HallMhdModel)(grid16, params)
        state = random_state(kind, grid16, rng, params)
        result = linear_verify(model, state.to_array(), dt=0.05, n_steps=200)
        assert result.max_error <= LINEAR_VERIFY_TOL
        assert result.t == pytest.approx(10.0)
        assert result.populated_modes > 0

    @pytest.mark.unit
    def test_zero_state_stays_zero(self, grid16, oldroyd_params):
        model = OldroydModel(grid16, oldroyd_params)
        table = precompute_propagators(grid16, 0.05, model)
        state = integrate(OldroydState.zeros(grid16, oldroyd_params), table, 10, model.rhs_array)
        assert not np.any(state.to_array())

    @pytest.mark.unit
    def test_non_finite_state(self, grid16, oldroyd_params, rng):
        model = OldroydModel(grid16, oldroyd_params)
        table = precompute_propagators(grid16, 0.05, model)
        state = random_state(ModelKind.OLDROYD, grid16, rng, oldroyd_params)
        with pytest.raises(BlowUpError) as exc_info:
            step(state, table, lambda a: np.full_like(a, np.nan), t=1.0, step_index=20)
        assert exc_info.value.t == pytest.approx(1.05)

    @pytest.mark.unit
    def test_nan_density_is_blow_up(self, grid16, oldroyd_params):
        model = OldroydModel(grid16, oldroyd_params)
        table = precompute_propagators(grid16, 0.05, model)
        array = OldroydState.zeros(grid16, oldroyd_params).to_array()
        array[0, 1, 0] = np.nan
        state = OldroydState.from_array(grid16, array, oldroyd_params)
        with pytest.raises(BlowUpError):
            step(state, table, model.rhs_array)

    @pytest.mark.unit
    def test_vacuum_error_reports_time(self, grid16, oldroyd_params):
        model = OldroydModel(grid16, oldroyd_params)
        table = precompute_propagators(grid16, 0.05, model)
        array = OldroydState.zeros(grid16, oldroyd_params).to_array()
        array[0, 0, 0] = -0.6 * grid16.box_length
        state = OldroydState.from_array(grid16, array, oldroyd_params)
        with pytest.raises(VacuumProximityError) as exc_info:
            step(state, table, model.rhs_array, t=2.0, step_index=40)
        assert exc_info.value.details["t"] == pytest.approx(2.0)
        assert exc_info.value.minimum == pytest.approx(0.4)

    @pytest.mark.unit
    def test_table_must_match_state(self, grid16, oldroyd_params, hall_params):
        table = precompute_propagators(grid16, 0.05, HallMhdModel(grid16, hall_params))
        with pytest.raises(SpectralError):
            step(OldroydState.zeros(grid16, oldroyd_params), table)


class TestConvergence:
    """Second-order accuracy of the nonlinear scheme."""

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", [ModelKind.OLDROYD, ModelKind.HALLMHD])
    def test_second_order(self, grid16, rng, kind, oldroyd_params):
        params = oldroyd_params if kind == ModelKind.OLDROYD else HallMhdParams(gamma=1.4)
        model = (OldroydModel if kind == ModelKind.OLDROYD else HallMhdModel)(grid16, params)
        state = random_state(kind, grid16, rng, params, amplitude=0.05)
        t_end = 5.0
        finals = []
        for dt in (0.02, 0.01, 0.005):
            table = precompute_propagators(grid16, dt, model)
            n_steps = int(round(t_end / dt))
            finals.append(integrate(state, table, n_steps, model.rhs_array).to_array())
        coarse = np.linalg.norm(finals[0] - finals[1])
        fine = np.linalg.norm(finals[1] - finals[2])
        assert fine > 0.0
        assert 3.5 <= coarse / fine <= 4.5
        assert math.isfinite(coarse)
