import numpy as np
import pytest

from src.engine.acoustics import (
    acoustic_energy,
    default_dt,
    from_maxwell,
    init_acoustic,
    kinetic_energy,
    layouts,
    step_acoustic,
    to_maxwell,
    vorticity,
)
from src.engine.maxwell import step
from src.models.grid import Layout
from src.models.schemes import AcousticSchemeId
from src.models.states import AcousticState

A = AcousticSchemeId
TWO_PI = 2 * np.pi


def _pulse(scheme, grid, c=1.0, eps=1.0) -> AcousticState:
    return init_acoustic(
        scheme, grid,
        lambda x, y: np.sin(TWO_PI * y),
        lambda x, y: np.cos(TWO_PI * (x + y)),
        lambda x, y: np.exp(-40 * ((x - 0.5) ** 2 + (y - 0.5) ** 2)),
        c, eps,
    )


class TestLayouts:
    def test_renaming(self):
        assert layouts(A.YEE_ORIGINAL) == (Layout.EDGE_X, Layout.EDGE_Y, Layout.NODE)
        assert layouts(A.CENTRAL_EXTENDED) == (Layout.CELL,) * 3

    def test_normal_axes(self, periodic_grid):
        state = _pulse(A.YEE_COLLOCATED_EXTENDED, periodic_grid)
        assert state.u.normal_axis == 0
        assert state.v.normal_axis == 1

    def test_rejects_bad_parameters(self, periodic_grid):
        with pytest.raises(ValueError):
            _pulse(A.YEE_ORIGINAL, periodic_grid, eps=0.0)


class TestStep:
    @pytest.mark.parametrize("scheme", list(A))
    def test_vorticity_invariant(self, periodic_grid, scheme):
        grid = periodic_grid
        state = _pulse(scheme, grid)
        before = vorticity(scheme, state, grid).interior(grid)
        dt = default_dt(scheme, grid)
        for _ in range(100):
            state = step_acoustic(scheme, state, grid, dt)
        after = vorticity(scheme, state, grid).interior(grid)
        assert np.max(np.abs(after - before)) < 1e-10

    @pytest.mark.parametrize("eps", [1.0, 0.1, 0.01])
    def test_energy_conserved(self, periodic_grid, eps):
        grid = periodic_grid
        scheme = A.YEE_COLLOCATED_EXTENDED
        dt = default_dt(scheme, grid, c=1.0, eps=eps)
        previous = _pulse(scheme, grid, eps=eps)
        current = step_acoustic(scheme, previous, grid, dt)
        reference = acoustic_energy(previous, current, grid)
        for _ in range(100):
            previous, current = current, step_acoustic(scheme, current, grid, dt)
            assert acoustic_energy(previous, current, grid) == pytest.approx(reference, rel=1e-10)

    def test_dt_scales_with_eps(self, periodic_grid):
        scheme = A.CENTRAL_EXTENDED
        assert default_dt(scheme, periodic_grid, eps=0.01) == pytest.approx(
            0.01 * default_dt(scheme, periodic_grid)
        )

    def test_rejects_bad_dt(self, periodic_grid):
        with pytest.raises(ValueError):
            step_acoustic(A.YEE_ORIGINAL, _pulse(A.YEE_ORIGINAL, periodic_grid), periodic_grid, -1)

    def test_divergence_free_velocity_at_rest(self, periodic_grid):
        """Constant pressure with a discretely divergence-free velocity stays put."""
        grid = periodic_grid
        scheme = A.YEE_ORIGINAL
        state = init_acoustic(
            scheme, grid, lambda x, y: np.sin(TWO_PI * y), lambda x, y: 0.0, lambda x, y: 1.0
        )
        moved = step_acoustic(scheme, state, grid, default_dt(scheme, grid))
        np.testing.assert_allclose(moved.u.interior(grid), state.u.interior(grid), atol=1e-13)
        np.testing.assert_allclose(moved.p.interior(grid), 1.0, atol=1e-13)
        assert kinetic_energy(moved, grid) == pytest.approx(kinetic_energy(state, grid))


class TestMaxwellEquivalence:
    @pytest.mark.parametrize("scheme", list(A))
    def test_renamed_step_matches(self, periodic_grid, scheme):
        grid = periodic_grid
        state = _pulse(scheme, grid)
        dt = default_dt(scheme, grid)
        acoustic = step_acoustic(scheme, state, grid, dt)
        maxwell = from_maxwell(step(scheme.maxwell, to_maxwell(state), grid, dt))
        for a, b in zip((acoustic.u, acoustic.v, acoustic.p), (maxwell.u, maxwell.v, maxwell.p)):
            np.testing.assert_allclose(a.interior(grid), b.interior(grid), atol=1e-13)

    def test_round_trip_keeps_layouts(self, periodic_grid):
        state = _pulse(A.YEE_ORIGINAL, periodic_grid)
        back = from_maxwell(to_maxwell(state))
        assert (back.u.layout, back.v.layout, back.p.layout) == layouts(A.YEE_ORIGINAL)
        np.testing.assert_array_equal(back.p.data, state.p.data)
