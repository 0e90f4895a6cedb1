"""Tests for the Hall-MHD system."""

import numpy as np
import pytest

from odhall.domain.entities import (
    HallMhdParams,
    HallMhdState,
    ModelKind,
    VectorField,
)
from odhall.domain.services import HallMhdModel
from odhall.domain.services.hallmhd import (
    hall_term,
    induction_curl_form,
    induction_transport,
    linear_symbol_hallmhd,
    lorentz_identity_form,
    lorentz_term,
    project_divfree,
)
from odhall.domain.services.spectral import divergence
from odhall.shared.exceptions import VacuumProximityError
from tests.oracles import (
    DirectConvolution,
    hallmhd_rhs_oracle,
    random_coeffs,
    random_state,
    relative_error,
)


class TestLinearSymbol:
    """A(xi) of the Hall-MHD unknowns."""

    @pytest.mark.unit
    def test_magnetic_block_is_heat_flow(self, rng):
        xi = rng.normal(size=(20, 2))
        A = linear_symbol_hallmhd(xi, gamma=1.4)
        sq = np.sum(xi**2, axis=-1)
        np.testing.assert_allclose(A[:, 3, 3], -sq)
        np.testing.assert_allclose(A[:, 4, 4], -sq)
        assert not np.any(A[:, 3:, :3])
        assert not np.any(A[:, :3, 3:])

    @pytest.mark.unit
    def test_zero_frequency_is_zero(self):
        assert not np.any(linear_symbol_hallmhd(np.zeros(2)))

    @pytest.mark.unit
    def test_energy_is_dissipated(self, rng):
        xi = rng.normal(scale=3.0, size=(200, 2))
        A = linear_symbol_hallmhd(xi, gamma=1.4)
        W = np.diag([1.4, 1.0, 1.0, 1.0, 1.0])
        M = W @ A + np.conj(np.swapaxes(A, -1, -2)) @ W
        assert np.max(np.linalg.eigvalsh(M)) <= 1e-10


class TestVectorIdentities:
    """Independent evaluations of the magnetic terms agree under dealiasing."""

    @pytest.mark.unit
    def test_lorentz_forms_agree(self, grid16, rng):
        for _ in range(20):
            B = VectorField.from_array(grid16, random_coeffs(grid16, rng, 2, 0.5))
            assert (
                relative_error(lorentz_term(B).stack(), lorentz_identity_form(B).stack()) <= 1e-10
            )

    @pytest.mark.unit
    def test_induction_forms_agree(self, grid16, rng):
        for _ in range(20):
            u = VectorField.from_array(grid16, random_coeffs(grid16, rng, 2, 0.5))
            B = VectorField.from_array(grid16, random_coeffs(grid16, rng, 2, 0.5))
            transport = induction_transport(u, B).stack()
            assert relative_error(transport, induction_curl_form(u, B).stack()) <= 1e-10

    @pytest.mark.unit
    def test_hall_term_is_divergence_free(self, grid16, rng):
        state = random_state(ModelKind.HALLMHD, grid16, rng, HallMhdParams())
        out = hall_term(state.B, state.rho)
        scale = np.max(np.abs(out.stack()))
        assert np.max(np.abs(divergence(out).coeffs)) <= 1e-12 * max(scale, 1.0)

    @pytest.mark.unit
    def test_hall_term_floor(self, grid16):
        state = HallMhdState.zeros(grid16)
        array = state.to_array()
        array[0, 0, 0] = -0.6 * grid16.box_length
        bad = state.with_array(array)
        with pytest.raises(VacuumProximityError):
            hall_term(bad.B, bad.rho, rho_floor=0.5)


class TestProjection:
    """Leray projection onto divergence-free fields."""

    @pytest.mark.unit
    def test_removes_divergence(self, grid16, rng):
        V = VectorField.from_array(grid16, random_coeffs(grid16, rng, 2, 1.0))
        P = project_divfree(V)
        assert np.max(np.abs(divergence(P).coeffs)) <= 1e-12

    @pytest.mark.unit
    def test_idempotent(self, grid16, rng):
        V = VectorField.from_array(grid16, random_coeffs(grid16, rng, 2, 1.0))
        once = project_divfree(V).stack()
        twice = project_divfree(project_divfree(V)).stack()
        np.testing.assert_allclose(twice, once, atol=1e-13)


class TestNonlinearRhs:
    """F1, G1, H1 against direct convolution."""

    @pytest.mark.integration
    @pytest.mark.parametrize("hall", [True, False])
    def test_matches_direct_convolution(self, grid16, rng, hall):
        params = HallMhdParams(gamma=1.4, hall=hall)
        model = HallMhdModel(grid16, params)
        conv = DirectConvolution(grid16)
        for _ in range(20):
            state = random_state(ModelKind.HALLMHD, grid16, rng, params)
            actual = model.nonlinear_rhs(state).to_array()
            assert relative_error(actual, hallmhd_rhs_oracle(state, conv)) <= 1e-9

    @pytest.mark.unit
    def test_hall_switch_changes_only_induction(self, grid16, rng):
        state = random_state(ModelKind.HALLMHD, grid16, rng, HallMhdParams(hall=True))
        with_hall = HallMhdModel(grid16, HallMhdParams(hall=True)).nonlinear_rhs(state).to_array()
        without = HallMhdModel(grid16, HallMhdParams(hall=False)).nonlinear_rhs(state).to_array()
        np.testing.assert_array_equal(with_hall[:3], without[:3])
        assert np.max(np.abs(with_hall[3:] - without[3:])) > 0.0

    @pytest.mark.unit
    def test_induction_output_is_divergence_free(self, grid16, hall_params, rng):
        state = random_state(ModelKind.HALLMHD, grid16, rng, hall_params)
        rhs = HallMhdModel(grid16, hall_params).nonlinear_rhs(state)
        assert np.max(np.abs(divergence(rhs.H1).coeffs)) <= 1e-12

    @pytest.mark.unit
    def test_zero_state(self, grid16, hall_params):
        rhs = HallMhdModel(grid16, hall_params).nonlinear_rhs(HallMhdState.zeros(grid16, hall_params))
        assert not np.any(rhs.to_array())
