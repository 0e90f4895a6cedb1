"""Compressible Oldroyd-B system in perturbation form.

Unknowns (rho, u, tau) with rho = density - 1, pressure law P = density^gamma,
relaxation a = 1 and coupling omega = 1/2. The linearised system in Fourier
variables reads

    rho_t + i xi.u = F
    u_t + 1/2 |xi|^2 u + 1/2 xi (xi.u) + i gamma xi rho - i tau xi = G
    tau_t + tau - (i/2)(xi u^T + u xi^T) = H

and the nonlinear terms are

    F = -div(rho u)
    G = -u.grad u - 1/2 I(rho) (Delta + grad div) u - I(rho) div tau + k(rho) grad rho
    H = -u.grad tau - g_b(tau, grad u)

with I(rho) = rho / (1 + rho) and
k(rho) = gamma I(rho) + (gamma - gamma (1 + rho)^(gamma - 1)) / (1 + rho).
"""

import math
from typing import (
    Optional,
    Tuple,
)

import numpy as np

from odhall.domain.entities import (
    ModelKind,
    OldroydRhs,
    OldroydState,
    SpectralField,
    SymTensorField,
    VectorField,
)
from odhall.domain.services.model_base import (
    ModelInterface,
    check_density_floor,
)
from odhall.shared.constants import (
    DEFAULT_GAMMA,
    DEFAULT_RHO_FLOOR,
)


def material_coeffs(
    rho: np.ndarray,
    gamma: float,
    rho_floor: float = DEFAULT_RHO_FLOOR,
) -> Tuple[np.ndarray, np.ndarray]:
    """Pointwise I(rho) and k(rho) from physical density samples.

    Raises:
        VacuumProximityError: If min(1 + rho) < rho_floor
    """
    rho = np.asarray(rho, dtype=np.float64)
    check_density_floor(rho, rho_floor)
    density = 1.0 + rho
    inertia = rho / density
    pressure_slope = gamma * density ** (gamma - 1.0)
    k = gamma * inertia + (gamma - pressure_slope) / density
    return inertia, k


def g_b_components(a, c, d, m11, m12, m21, m22, b: float):
    """g_b written out for tau = [[a, c], [c, d]] and (grad u)_ij = m_ij = d_j u^i.

    Returns the independent entries (g11, g12, g22).
    """
    w = 0.5 * (m12 - m21)
    e = 0.5 * (m12 + m21)
    g11 = -2.0 * c * w + 2.0 * b * (m11 * a + e * c)
    g12 = w * (a - d) + b * (c * (m11 + m22) + e * (a + d))
    g22 = 2.0 * c * w + 2.0 * b * (e * c + m22 * d)
    return g11, g12, g22


def g_b(tau: np.ndarray, grad_u: np.ndarray, b: float) -> np.ndarray:
    """g_b(tau, grad u) = tau W - W tau + b (D tau + tau D) on (..., 2, 2) arrays.

    W and D are the antisymmetric and symmetric parts of grad u with
    (grad u)_ij = d_j u^i. The result is symmetric by construction.
    """
    tau = np.asarray(tau)
    grad_u = np.asarray(grad_u)
    g11, g12, g22 = g_b_components(
        tau[..., 0, 0],
        tau[..., 0, 1],
        tau[..., 1, 1],
        grad_u[..., 0, 0],
        grad_u[..., 0, 1],
        grad_u[..., 1, 0],
        grad_u[..., 1, 1],
        b,
    )
    return np.stack([np.stack([g11, g12], -1), np.stack([g12, g22], -1)], -2)


def linear_symbol_oldroyd(xi: np.ndarray, gamma: float = DEFAULT_GAMMA) -> np.ndarray:
    """A(xi) for the unknowns (rho, u1, u2, tau11, tau12, tau22).

    The off-diagonal stress appears twice in div tau, which is folded into
    the u rows.
    """
    xi = np.asarray(xi, dtype=np.float64)
    x1, x2 = xi[..., 0], xi[..., 1]
    sq = x1**2 + x2**2
    A = np.zeros(xi.shape[:-1] + (6, 6), dtype=np.complex128)
    A[..., 0, 1] = -1j * x1
    A[..., 0, 2] = -1j * x2
    A[..., 1, 0] = -1j * gamma * x1
    A[..., 1, 1] = -0.5 * sq - 0.5 * x1 * x1
    A[..., 1, 2] = -0.5 * x1 * x2
    A[..., 1, 3] = 1j * x1
    A[..., 1, 4] = 1j * x2
    A[..., 2, 0] = -1j * gamma * x2
    A[..., 2, 1] = -0.5 * x1 * x2
    A[..., 2, 2] = -0.5 * sq - 0.5 * x2 * x2
    A[..., 2, 4] = 1j * x1
    A[..., 2, 5] = 1j * x2
    A[..., 3, 1] = 1j * x1
    A[..., 4, 1] = 0.5j * x2
    A[..., 4, 2] = 0.5j * x1
    A[..., 5, 2] = 1j * x2
    for i in (3, 4, 5):
        A[..., i, i] = -1.0
    return A


class OldroydModel(ModelInterface):
    """Oldroyd-B system bound to a grid."""

    kind = ModelKind.OLDROYD
    state_cls = OldroydState

    def linear_symbol(self, xi: np.ndarray) -> np.ndarray:
        return linear_symbol_oldroyd(xi, self.params.gamma)

    def zero_mode_propagators(self, dt: float):
        decay = math.exp(-dt)
        if dt > 0:
            phi1 = -math.expm1(-dt)
            phi2 = (math.expm1(-dt) + dt) / dt
        else:
            phi1 = phi2 = 0.0
        E = np.diag([1.0, 1.0, 1.0, decay, decay, decay]).astype(np.complex128)
        P1 = np.diag([dt, dt, dt, phi1, phi1, phi1]).astype(np.complex128)
        P2 = np.diag([dt / 2] * 3 + [phi2] * 3).astype(np.complex128)
        return E, P1, P2

    def nonlinear_rhs(self, state: OldroydState, t: Optional[float] = None) -> OldroydRhs:
        """Assemble F, G, H with every product dealiased.

        Raises:
            VacuumProximityError: If 1 + rho drops below the density floor
        """
        ws = self.workspace
        grid = self.grid
        a = state.to_array()
        rho_hat, u_hat, tau_hat = a[0], a[1:3], a[3:6]

        rho_full = self.density_samples(rho_hat, t)
        inertia, k = material_coeffs(rho_full, self.params.gamma, self.params.rho_floor)
        inertia = ws.physical(ws.forward(inertia))
        k = ws.physical(ws.forward(k))

        rho = ws.physical(rho_hat)
        u1, u2 = ws.physical(u_hat)
        t11, t12, t22 = ws.physical(tau_hat)

        du1 = ws.physical(np.stack([ws.d1(u_hat[0]), ws.d2(u_hat[0])]))
        du2 = ws.physical(np.stack([ws.d1(u_hat[1]), ws.d2(u_hat[1])]))
        m11, m12 = du1
        m21, m22 = du2

        # F = -div(rho u)
        flux = ws.spectral(np.stack([rho * u1, rho * u2]))
        F = -(ws.d1(flux[0]) + ws.d2(flux[1]))

        # (Delta + grad div) u
        div_u = ws.d1(u_hat[0]) + ws.d2(u_hat[1])
        visc = ws.physical(
            np.stack([-grid.xi_sq * u_hat[0] + ws.d1(div_u), -grid.xi_sq * u_hat[1] + ws.d2(div_u)])
        )
        div_tau = ws.physical(
            np.stack(
                [ws.d1(tau_hat[0]) + ws.d2(tau_hat[1]), ws.d1(tau_hat[1]) + ws.d2(tau_hat[2])]
            )
        )
        grad_rho = ws.physical(np.stack([ws.d1(rho_hat), ws.d2(rho_hat)]))

        G = ws.spectral(
            np.stack(
                [
                    -(u1 * m11 + u2 * m12)
                    - 0.5 * inertia * visc[0]
                    - inertia * div_tau[0]
                    + k * grad_rho[0],
                    -(u1 * m21 + u2 * m22)
                    - 0.5 * inertia * visc[1]
                    - inertia * div_tau[1]
                    + k * grad_rho[1],
                ]
            )
        )

        # H = -u.grad tau - g_b(tau, grad u)
        dtau = ws.physical(np.stack([ws.d1(tau_hat), ws.d2(tau_hat)]))
        advect = u1 * dtau[0] + u2 * dtau[1]
        g11, g12, g22 = g_b_components(t11, t12, t22, m11, m12, m21, m22, self.params.b)
        H = ws.spectral(-advect - np.stack([g11, g12, g22]))

        return OldroydRhs(
            F=SpectralField(grid, F),
            G=VectorField.from_array(grid, G),
            H=SymTensorField.from_array(grid, H),
        )


def nonlinear_rhs_oldroyd(state: OldroydState) -> OldroydRhs:
    """Nonlinear terms (F, G, H) of an Oldroyd-B state."""
    return OldroydModel(state.grid, state.params).nonlinear_rhs(state)
