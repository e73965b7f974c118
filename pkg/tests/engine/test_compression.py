import numpy as np
import pytest

from src.engine.compression import (
    CompressionFlux,
    EdgeVelocityProfile,
    advect_conservative,
    edge_upwind_fluxes,
    flux_edge_upwind,
    flux_lagrange_projection,
    flux_leveque_cellU,
    flux_relaxation_pressureless,
    flux_roe_nonconst,
    fluxes,
    lagrange_lengths,
    lagrange_projection_fluxes,
    leveque_cell_fluxes,
    ode_compression_update,
    roe_average,
    roe_fluxes,
)
from src.engine.diagnostics import convergence_rate
from src.engine.errors import CompressionCollapseError

C = CompressionFlux
N = 64
DX = 1.0 / N


def _velocity(x):
    return 1.0 + 0.5 * np.sin(2 * np.pi * x)


def _profiles():
    return {
        C.LEVEQUE_CELL: EdgeVelocityProfile.sample(_velocity, N, DX, at_edges=False),
        C.ROE: EdgeVelocityProfile.sample(_velocity, N, DX, at_edges=False),
        C.EDGE_UPWIND: EdgeVelocityProfile.sample(_velocity, N, DX),
        C.LAGRANGE_PROJECTION: EdgeVelocityProfile.sample(_velocity, N, DX),
    }


class TestProfile:
    def test_sample_positions(self):
        edges = EdgeVelocityProfile.sample(lambda x: x, 4, 0.25)
        cells = EdgeVelocityProfile.sample(lambda x: x, 4, 0.25, at_edges=False)
        np.testing.assert_allclose(edges.values, [0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(cells.values, [0.125, 0.375, 0.625, 0.875])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            EdgeVelocityProfile(np.array([1.0, np.nan]))


class TestFluxes:
    def test_roe_average_property(self, rng):
        q = rng.uniform(0.5, 2.0, 16)
        u = rng.uniform(-1.0, 1.0, 16)
        u_bar = roe_average(q, u)
        np.testing.assert_allclose(
            np.roll(u, -1) * np.roll(q, -1) - u * q, u_bar * (np.roll(q, -1) - q), atol=1e-12
        )

    def test_roe_average_degenerate(self):
        q = np.ones(4)
        u = np.array([1.0, 3.0, 1.0, 3.0])
        np.testing.assert_allclose(roe_average(q, u), 2.0)

    def test_roe_arithmetic(self):
        u = np.array([1.0, 3.0, 5.0])
        np.testing.assert_allclose(roe_average(np.ones(3), u, "arithmetic"), [2.0, 4.0, 3.0])
        with pytest.raises(ValueError):
            roe_average(np.ones(3), u, "harmonic")

    def test_edge_upwind_direction(self):
        q = np.array([1.0, 2.0, 3.0])
        u = np.array([1.0, -1.0, 2.0])
        np.testing.assert_allclose(edge_upwind_fluxes(q, u), [1.0, -3.0, 6.0])

    def test_leveque_uses_cell_products(self):
        q = np.array([1.0, 2.0, 3.0])
        u = np.array([2.0, 1.0, -4.0])
        np.testing.assert_allclose(leveque_cell_fluxes(q, u), [2.0, -12.0, 2.0])

    @pytest.mark.parametrize("variant", list(C))
    def test_constant_velocity_is_upwind(self, rng, variant):
        q = rng.uniform(0.5, 2.0, N)
        at_edges = variant not in (C.LEVEQUE_CELL, C.ROE)
        profile = EdgeVelocityProfile(np.full(N, 0.7), at_edges)
        f = fluxes(q, profile, variant, dt=0.01, dx=DX)
        np.testing.assert_allclose(f, 0.7 * q, rtol=1e-12)

    def test_sampling_mismatch(self):
        profile = EdgeVelocityProfile(np.ones(4), at_edges=True)
        with pytest.raises(ValueError):
            fluxes(np.ones(4), profile, C.ROE)
        with pytest.raises(ValueError):
            fluxes(np.ones(4), EdgeVelocityProfile(np.ones(4), False), C.EDGE_UPWIND)

    def test_scalar_helpers(self, rng):
        q = rng.uniform(0.5, 2.0, 8)
        u = rng.uniform(-1.0, 1.0, 8)
        for i in range(8):
            assert flux_leveque_cellU(q, u, i) == leveque_cell_fluxes(q, u)[i]
            assert flux_roe_nonconst(q, u, i) == roe_fluxes(q, u)[i]
            assert flux_edge_upwind(q, u, i) == edge_upwind_fluxes(q, u)[i]
            assert flux_lagrange_projection(q, u, 0.01, 0.1, i) == pytest.approx(
                lagrange_projection_fluxes(q, u, 0.01, 0.1)[i]
            )

    def test_lagrange_lengths(self):
        u = np.array([0.0, 1.0, 0.0, -1.0])
        np.testing.assert_allclose(lagrange_lengths(u, 0.1, 1.0), [1.1, 1.1, 0.9, 0.9])

    def test_lagrange_collapse(self):
        u = np.array([1.0, -1.0, 1.0, -1.0])
        with pytest.raises(CompressionCollapseError):
            lagrange_lengths(u, 0.5, 1.0)


class TestAdvection:
    @pytest.mark.parametrize("variant", list(C))
    def test_conserves_mass(self, variant):
        x = (np.arange(N) + 0.5) * DX
        q0 = 1.0 + 0.5 * np.exp(-50 * (x - 0.5) ** 2)
        q = advect_conservative(q0, _profiles()[variant], variant, 0.4 * DX, DX, 100)
        assert q.sum() == pytest.approx(q0.sum(), rel=1e-12)

    def test_edge_upwind_positive(self):
        x = (np.arange(N) + 0.5) * DX
        q0 = np.where(np.abs(x - 0.5) < 0.1, 1.0, 1e-3)
        q = advect_conservative(q0, _profiles()[C.EDGE_UPWIND], C.EDGE_UPWIND, 0.4 * DX, DX, 200)
        assert np.all(q > 0)

    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError):
            advect_conservative(np.ones(N), _profiles()[C.ROE], C.ROE, 0.0, DX, 1)

    def test_ode_update_keeps_constant_state_with_constant_velocity(self):
        q = ode_compression_update(np.full(8, 2.0), np.full(8, 0.5), 0.1, 0.125)
        np.testing.assert_allclose(q, 2.0)

    def test_ode_update_collapse(self):
        u = np.array([0.0, 10.0, 0.0, -10.0] * 2)
        with pytest.raises(CompressionCollapseError):
            ode_compression_update(np.ones(8), u, 1.0, 0.125)


class TestRelaxation:
    def test_uniform_state(self):
        np.testing.assert_allclose(
            flux_relaxation_pressureless((2.0, 0.5), (2.0, 0.5), 1.0), [1.0, 0.5]
        )

    def test_compression_raises_density(self):
        f = flux_relaxation_pressureless((1.0, 1.0), (1.0, 0.0), 2.0)
        # rho* = 1 / (1 - 1/4), u* = 1/2
        np.testing.assert_allclose(f, [2.0 / 3.0, 1.0 / 3.0])

    def test_too_small_speed(self):
        with pytest.raises(CompressionCollapseError):
            flux_relaxation_pressureless((1.0, 1.0), (1.0, -1.0), 0.5)

    def test_rejects_non_positive_speed(self):
        with pytest.raises(ValueError):
            flux_relaxation_pressureless((1.0, 1.0), (1.0, 1.0), 0.0)


class TestSmoothConvergence:
    @staticmethod
    def _q(x):
        return 1.0 + 0.3 * np.cos(2 * np.pi * x)

    @staticmethod
    def _u(x):
        return 1.0 + 0.1 * np.sin(2 * np.pi * x)

    @pytest.mark.parametrize("variant", list(C))
    def test_first_order_against_exact_flux(self, variant):
        errors, spacings = [], []
        for n in (32, 64, 128, 256):
            dx = 1.0 / n
            q = self._q((np.arange(n) + 0.5) * dx)
            profile = EdgeVelocityProfile.sample(
                self._u, n, dx, at_edges=variant not in (C.LEVEQUE_CELL, C.ROE)
            )
            edges = (np.arange(n) + 1.0) * dx
            exact = self._u(edges) * self._q(edges)
            f = fluxes(q, profile, variant, dt=0.4 * dx, dx=dx)
            errors.append(float(np.max(np.abs(f - exact))))
            spacings.append(dx)
        assert convergence_rate(errors, spacings) >= 0.8


class TestPositivity:
    def test_lagrange_projection_keeps_sign(self, rng):
        q0 = rng.uniform(0.0, 1.0, N)
        q0[::5] = 0.0
        u_edges = rng.uniform(-1.0, 1.0, N)
        dt = 0.4 * DX / np.max(np.abs(u_edges))
        profile = EdgeVelocityProfile(u_edges)
        q = q0
        for _ in range(50):
            q = advect_conservative(q, profile, C.LAGRANGE_PROJECTION, dt, DX, 1)
            assert q.min() >= -1e-14
        assert q.sum() == pytest.approx(q0.sum(), rel=1e-12)


class TestLevequeRoeAgreement:
    def test_equal_for_positive_velocity(self, rng):
        q = rng.uniform(0.5, 2.0, N)
        u = 0.5 + q
        u_bar = roe_average(q, u)
        assert np.all(u_bar > 0)
        np.testing.assert_allclose(roe_fluxes(q, u), leveque_cell_fluxes(q, u), rtol=1e-12)
        for i in (0, N // 2, N - 1):
            assert flux_roe_nonconst(q, u, i) == pytest.approx(flux_leveque_cellU(q, u, i))

    def test_arithmetic_average_differs(self, rng):
        q = rng.uniform(0.5, 2.0, N)
        u = 0.5 + q
        arithmetic = roe_fluxes(q, u, "arithmetic")
        assert np.max(np.abs(arithmetic - leveque_cell_fluxes(q, u))) > 1e-3
