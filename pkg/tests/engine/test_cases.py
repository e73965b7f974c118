import numpy as np
import pytest

from src.engine.cases import (
    CASES,
    build_case,
    case_profile,
    gresho_pressure,
    gresho_velocity,
    list_cases,
    riemann_problem,
    smooth_pressure,
    smooth_velocity,
)
from src.engine.errors import ConfigError
from src.engine.euler import cons_to_prim
from src.models.grid import Grid
from src.models.schemes import CaseId


class TestShockTubes:
    def test_sod_cells(self):
        grid = CASES[CaseId.SOD].grid(nx=100)
        prim = cons_to_prim(build_case(CaseId.SOD, grid))
        g = grid.ghost
        left = (prim.rho.data[g, g], prim.u.data[g, g], prim.p.data[g, g])
        right = (prim.rho.data[-g - 1, g], prim.u.data[-g - 1, g], prim.p.data[-g - 1, g])
        assert left == pytest.approx((1.0, 0.0, 1.0))
        assert right == pytest.approx((0.125, 0.0, 0.1))

    def test_ghosts_hold_initial_data(self):
        grid = CASES[CaseId.LAX].grid(nx=50)
        state = build_case(CaseId.LAX, grid)
        assert state.rho.data[0, 1] == pytest.approx(0.445)
        assert state.rho.data[-1, 1] == pytest.approx(0.5)

    def test_riemann_problem_only_for_tubes(self):
        assert riemann_problem(CaseId.LEVEQUE).left.rho == 3.0
        with pytest.raises(ConfigError):
            riemann_problem(CaseId.GRESHO_VORTEX)


class TestVortices:
    def test_gresho_pressure_continuous(self):
        for r0 in (0.2, 0.4):
            r = np.array([r0 - 1e-15, r0])
            p = gresho_pressure(r, 0.1)
            assert abs(p[1] - p[0]) < 1e-13

    def test_gresho_peak_velocity(self):
        assert gresho_velocity(np.array([0.2]))[0] == pytest.approx(1.0)
        assert gresho_velocity(np.array([0.45]))[0] == 0.0

    @pytest.mark.parametrize("mach", [0.1, 0.01, 1e-3])
    def test_gresho_max_mach(self, mach):
        r = np.linspace(0.0, 0.5, 5001)
        local = gresho_velocity(r) / np.sqrt(1.4 * gresho_pressure(r, mach))
        assert local.max() == pytest.approx(mach, rel=0.02)

    def test_smooth_pressure_at_centre(self):
        assert smooth_pressure(np.array([0.0]), 0.3)[0] == pytest.approx(20.0 / (1.4 * 0.09))

    def test_smooth_radial_equilibrium(self):
        r = np.linspace(0.01, 0.3, 200)
        h = 1e-6
        dp = (smooth_pressure(r + h, 0.3) - smooth_pressure(r - h, 0.3)) / (2 * h)
        np.testing.assert_allclose(dp, smooth_velocity(r) ** 2 / r, rtol=1e-5)

    def test_vortex_velocity_is_tangential(self):
        x = np.array([0.5, 0.7])
        _, u, v, _ = case_profile(CaseId.GRESHO_VORTEX)(x, np.array([0.5, 0.5]))
        assert (u[0], v[0]) == (0.0, 0.0)
        assert u[1] == pytest.approx(0.0)
        assert v[1] == pytest.approx(1.0)

    def test_high_mach_rejected(self):
        with pytest.raises(ConfigError):
            build_case(CaseId.GRESHO_VORTEX, Grid.uniform(20, 20), mach=2.0)

    def test_non_positive_mach(self):
        with pytest.raises(ConfigError):
            case_profile(CaseId.SMOOTH_VORTEX, mach=0.0)


class TestShearLayer:
    def test_ranges(self):
        grid = CASES[CaseId.KELVIN_HELMHOLTZ].grid(nx=40, ny=20)
        prim = cons_to_prim(build_case(CaseId.KELVIN_HELMHOLTZ, grid))
        assert set(np.unique(np.round(prim.rho.interior(grid), 12))) == {0.999, 1.001}
        np.testing.assert_allclose(prim.p.interior(grid), 5.0)
        assert np.abs(prim.v.interior(grid)).max() <= 1e-3


class TestValidation:
    def test_domain_mismatch(self):
        with pytest.raises(ConfigError):
            build_case(CaseId.SOD, Grid.uniform(10, 10, 2.0, 1.0))

    def test_three_dimensional_grid(self, grid_3d):
        with pytest.raises(ConfigError):
            build_case(CaseId.SOD, grid_3d)

    def test_unknown_case(self, small_grid):
        with pytest.raises(ConfigError):
            build_case("sod", small_grid)

    def test_list_cases(self):
        names = [name for name, _ in list_cases()]
        assert names == [c.value for c in CaseId]
        assert dict(list_cases())["kh"].lx == 2.0
