"""Linear acoustics with the sequential-explicit Maxwell operators.

    dp/dt = -c^2 div v,    dv/dt = -(1/eps^2) grad p

Pressure is updated first, the velocity then sees p^{n+1}. The schemes are
the Maxwell ones under the renaming (u, v, p) = (-Ey, Ex, -Bz).

Pure functions. No I/O.
"""

import logging
from collections.abc import Callable

import numpy as np

from src.config import settings
from src.engine.boundaries import fill_ghosts, init_from
from src.engine.maxwell import SCHEME_LAYOUTS
from src.engine.operators import operators_for
from src.models.grid import Field, Grid, Layout
from src.models.schemes import CFL_MAX, AcousticSchemeId
from src.models.states import AcousticState, MaxwellState2D

logger = logging.getLogger(__name__)


def layouts(scheme: AcousticSchemeId) -> tuple[Layout, Layout, Layout]:
    """(u, v, p) layouts, read off the Maxwell layouts through the renaming."""
    lb, lx, ly = SCHEME_LAYOUTS[scheme.maxwell]
    return ly, lx, lb


def init_acoustic(
    scheme: AcousticSchemeId,
    grid: Grid,
    u: Callable[..., np.ndarray | float],
    v: Callable[..., np.ndarray | float],
    p: Callable[..., np.ndarray | float],
    c: float = 1.0,
    eps: float = 1.0,
) -> AcousticState:
    lu, lv, lp = layouts(scheme)
    state = AcousticState(
        init_from(u, grid, lu, normal_axis=0),
        init_from(v, grid, lv, normal_axis=1),
        init_from(p, grid, lp),
        c,
        eps,
    )
    for f in (state.u, state.v, state.p):
        fill_ghosts(f, grid)
    return state


def default_dt(scheme: AcousticSchemeId, grid: Grid, c: float = 1.0, eps: float = 1.0,
               cfl: float | None = None) -> float:
    """dt from the acoustic CFL with the effective speed c/eps."""
    if cfl is None:
        cfl = settings.cfl_safety * CFL_MAX[scheme.maxwell]
    return cfl * min(grid.spacing) * eps / c


def step_acoustic(
    scheme: AcousticSchemeId, state: AcousticState, grid: Grid, dt: float
) -> AcousticState:
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    ops = operators_for(scheme.maxwell, grid.spacing)
    g = grid.ghost
    new = state.copy()
    c2, inv_eps2 = state.c**2, 1.0 / state.eps**2

    new.p.data[grid.interior] -= c2 * dt * (ops.d(0, state.u.data, g) + ops.d(1, state.v.data, g))
    fill_ghosts(new.p, grid)
    new.u.data[grid.interior] -= dt * inv_eps2 * ops.dp(0, new.p.data, g)
    new.v.data[grid.interior] -= dt * inv_eps2 * ops.dp(1, new.p.data, g)
    fill_ghosts(new.u, grid)
    fill_ghosts(new.v, grid)
    return new


def vorticity(scheme: AcousticSchemeId, state: AcousticState, grid: Grid) -> Field:
    """D'_x v - D'_y u; invariant under step_acoustic."""
    ops = operators_for(scheme.maxwell, grid.spacing)
    g = grid.ghost
    values = ops.dp(0, state.v.data, g) - ops.dp(1, state.u.data, g)
    return Field.from_interior(grid, values, state.p.layout)


def to_maxwell(state: AcousticState) -> MaxwellState2D:
    """(Bz, Ex, Ey) = (-p, v, -u); valid as a stepping equivalence for c = eps = 1."""
    bz, ex, ey = state.p.copy(), state.v.copy(), state.u.copy()
    bz.data *= -1.0
    ey.data *= -1.0
    return MaxwellState2D(bz, ex, ey)


def from_maxwell(state: MaxwellState2D, c: float = 1.0, eps: float = 1.0) -> AcousticState:
    u, v, p = state.ey.copy(), state.ex.copy(), state.bz.copy()
    u.data *= -1.0
    p.data *= -1.0
    u.normal_axis, v.normal_axis = 0, 1
    return AcousticState(u, v, p, c, eps)


def kinetic_energy(state: AcousticState, grid: Grid) -> float:
    u, v = state.u.interior(grid), state.v.interior(grid)
    return 0.5 * grid.cell_volume * float(np.sum(u * u + v * v))


def acoustic_energy(before: AcousticState, after: AcousticState, grid: Grid) -> float:
    """Conserved quadratic form (p^n p^{n+1} / c^2 + eps^2 |v^n|^2) / 2, summed."""
    p0, p1 = before.p.interior(grid), after.p.interior(grid)
    u0, v0 = before.u.interior(grid), before.v.interior(grid)
    total = np.sum(p0 * p1) / before.c**2 + before.eps**2 * np.sum(u0 * u0 + v0 * v0)
    return 0.5 * grid.cell_volume * float(total)
