"""Time steppers for the 2D transverse-magnetic Maxwell system

    dBz/dt = -(dEy/dx - dEx/dy),   dEx/dt = dBz/dy,   dEy/dt = -dBz/dx

and for the 3D system on face-vertex dual grids.

Sequential-explicit schemes update B everywhere, refill the B ghosts, then
update E from the new B. The collocated explicit variant writes the same
update with all right-hand sides at the old time level. The upwind and
stationarity-preserving reference schemes are forward-Euler steps.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.engine.boundaries import fill_ghosts, init_from
from src.engine.errors import LayoutError, NoInvolutionError
from src.engine.operators import OperatorSet, operators_for
from src.engine.stencils import BracketExpr, BracketOp, bracket, evaluate
from src.models.grid import Field, Grid, Layout
from src.models.schemes import CFL_MAX, MaxwellSchemeId
from src.models.states import MaxwellState2D, MaxwellState3D

logger = logging.getLogger(__name__)

S = MaxwellSchemeId

# (Bz, Ex, Ey) layouts; the half-index variables of the original scheme keep
# integer storage and carry their offset in the layout tag only.
SCHEME_LAYOUTS: dict[MaxwellSchemeId, tuple[Layout, Layout, Layout]] = {
    S.YEE_ORIGINAL: (Layout.NODE, Layout.EDGE_Y, Layout.EDGE_X),
    S.YEE_COLLOCATED: (Layout.CELL,) * 3,
    S.YEE_COLLOCATED_EXPLICIT: (Layout.CELL,) * 3,
    S.YEE_COLLOCATED_EXTENDED: (Layout.CELL,) * 3,
    S.YEE_EXTENDED_STAGGERED: (Layout.NODE, Layout.CELL, Layout.CELL),
    S.CENTRAL: (Layout.CELL,) * 3,
    S.CENTRAL_EXTENDED: (Layout.CELL,) * 3,
    S.UPWIND_SPLIT: (Layout.CELL,) * 3,
    S.STAT_PRES_REFERENCE: (Layout.CELL,) * 3,
}

BZ, EX, EY = 0, 1, 2


def check_layouts(scheme: MaxwellSchemeId, state: MaxwellState2D) -> None:
    if scheme not in SCHEME_LAYOUTS:
        raise LayoutError(f"{scheme.value} has no 2D state layout")
    expected = SCHEME_LAYOUTS[scheme]
    actual = tuple(f.layout for f in state.fields)
    if actual != expected:
        names = [la.name for la in actual]
        raise LayoutError(
            f"{scheme.value} expects layouts {[la.name for la in expected]}, got {names}"
        )


def init_state(
    scheme: MaxwellSchemeId,
    grid: Grid,
    bz: Callable[..., np.ndarray | float],
    ex: Callable[..., np.ndarray | float],
    ey: Callable[..., np.ndarray | float],
) -> MaxwellState2D:
    """Sample the three components at the scheme's staggered positions."""
    lb, lx, ly = SCHEME_LAYOUTS[scheme]
    state = MaxwellState2D(
        init_from(bz, grid, lb), init_from(ex, grid, lx), init_from(ey, grid, ly)
    )
    for f in state.fields:
        fill_ghosts(f, grid)
    return state


def state_from_arrays(
    scheme: MaxwellSchemeId, grid: Grid, bz: np.ndarray, ex: np.ndarray, ey: np.ndarray
) -> MaxwellState2D:
    """Embed interior arrays and fill their ghosts."""
    lb, lx, ly = SCHEME_LAYOUTS[scheme]
    state = MaxwellState2D(
        Field.from_interior(grid, bz, lb),
        Field.from_interior(grid, ex, lx),
        Field.from_interior(grid, ey, ly),
    )
    for f in state.fields:
        fill_ghosts(f, grid)
    return state


def default_dt(scheme: MaxwellSchemeId, grid: Grid, cfl: float | None = None) -> float:
    if cfl is None:
        cfl = settings.cfl_safety * CFL_MAX[scheme]
    return cfl * min(grid.spacing)


def step(
    scheme: MaxwellSchemeId, state: MaxwellState2D, grid: Grid, dt: float
) -> MaxwellState2D:
    """Advance one time step; the input state is left untouched."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    check_layouts(scheme, state)
    new = state.copy()
    if scheme is S.YEE_COLLOCATED_EXPLICIT:
        _step_collocated_explicit(new, state, grid, dt)
    elif scheme.is_sequential:
        _step_sequential(operators_for(scheme, grid.spacing), new, grid, dt)
    else:
        rates = _forward_euler_rates(scheme, state, grid)
        for f, rate in zip(new.fields, rates):
            f.data[grid.interior] += dt * rate
    for f in new.fields:
        fill_ghosts(f, grid)
    return new


def _step_sequential(ops: OperatorSet, state: MaxwellState2D, grid: Grid, dt: float) -> None:
    g = grid.ghost
    bz, ex, ey = state.bz.data, state.ex.data, state.ey.data
    bz[grid.interior] -= dt * (ops.d(0, ey, g) - ops.d(1, ex, g))
    fill_ghosts(state.bz, grid)
    # E sees B^{n+1}
    ex[grid.interior] += dt * ops.dp(1, bz, g)
    ey[grid.interior] -= dt * ops.dp(0, bz, g)


def _step_collocated_explicit(
    new: MaxwellState2D, old: MaxwellState2D, grid: Grid, dt: float
) -> None:
    g, (nx, ny) = grid.ghost, grid.cells
    dx, dy = grid.dx, grid.dy

    def at(f: Field, di: int, dj: int) -> np.ndarray:
        return f.data[g + di: g + di + nx, g + dj: g + dj + ny]

    b, ex, ey = old.bz, old.ex, old.ey
    new.bz.data[grid.interior] = at(b, 0, 0) - dt * (
        (at(ey, 1, 0) - at(ey, 0, 0)) / dx - (at(ex, 0, 1) - at(ex, 0, 0)) / dy
    )
    new.ex.data[grid.interior] = (
        at(ex, 0, 0)
        + dt * (at(b, 0, 0) - at(b, 0, -1)) / dy
        - dt * dt / dy * (
            (at(ey, 1, 0) - at(ey, 0, 0) - at(ey, 1, -1) + at(ey, 0, -1)) / dx
            - (at(ex, 0, 1) - 2 * at(ex, 0, 0) + at(ex, 0, -1)) / dy
        )
    )
    new.ey.data[grid.interior] = (
        at(ey, 0, 0)
        - dt * (at(b, 0, 0) - at(b, -1, 0)) / dx
        + dt * dt / dx * (
            (at(ey, 1, 0) - 2 * at(ey, 0, 0) + at(ey, -1, 0)) / dx
            - (at(ex, 0, 1) - at(ex, 0, 0) - at(ex, -1, 1) + at(ex, -1, 0)) / dy
        )
    )


@dataclass(frozen=True)
class LinearTerm:
    """rate[target] += coef * expr(field[source])"""

    target: int
    source: int
    coef: float
    expr: BracketExpr


def forward_euler_terms(scheme: MaxwellSchemeId, dx: float, dy: float) -> list[LinearTerm]:
    """Right-hand side of a forward-Euler reference scheme as a term table."""
    jw, dj, ds = BracketOp.JUMP_WIDE, BracketOp.DOUBLE_JUMP, BracketOp.DOUBLE_SUM
    T = LinearTerm
    if scheme is S.UPWIND_SPLIT:
        return [
            T(BZ, EY, -1.0, bracket((0, jw), norm=2 * dx)),
            T(BZ, EX, 1.0, bracket((1, jw), norm=2 * dy)),
            T(BZ, BZ, 0.5, bracket((0, dj), norm=dx)),
            T(BZ, BZ, 0.5, bracket((1, dj), norm=dy)),
            T(EX, BZ, 1.0, bracket((1, jw), norm=2 * dy)),
            T(EX, EX, 0.5, bracket((1, dj), norm=dy)),
            T(EY, BZ, -1.0, bracket((0, jw), norm=2 * dx)),
            T(EY, EY, 0.5, bracket((0, dj), norm=dx)),
        ]
    if scheme is S.STAT_PRES_REFERENCE:
        h = min(dx, dy)
        cross = bracket((0, jw), (1, jw), norm=4 * dx * dy)
        return [
            T(BZ, EY, -1.0, bracket((0, jw), (1, ds), norm=8 * dx)),
            T(BZ, EX, 1.0, bracket((1, jw), (0, ds), norm=8 * dy)),
            T(BZ, BZ, 0.5, bracket((0, dj), (1, ds), norm=4 * dx)),
            T(BZ, BZ, 0.5, bracket((1, dj), (0, ds), norm=4 * dy)),
            T(EX, BZ, 1.0, bracket((1, jw), (0, ds), norm=8 * dy)),
            T(EX, EX, 0.5 * h, bracket((1, dj), (0, ds), norm=4 * dy * dy)),
            T(EX, EY, -0.5 * h, cross),
            T(EY, BZ, -1.0, bracket((0, jw), (1, ds), norm=8 * dx)),
            T(EY, EY, 0.5 * h, bracket((0, dj), (1, ds), norm=4 * dx * dx)),
            T(EY, EX, -0.5 * h, cross),
        ]
    raise ValueError(f"{scheme.value} is not a forward-Euler scheme")


def _forward_euler_rates(
    scheme: MaxwellSchemeId, state: MaxwellState2D, grid: Grid
) -> list[np.ndarray]:
    fields = state.fields
    rates = [np.zeros(grid.cells) for _ in fields]
    for term in forward_euler_terms(scheme, grid.dx, grid.dy):
        rates[term.target] += term.coef * evaluate(term.expr, fields[term.source].data, grid.ghost)
    return rates


def discrete_involution(scheme: MaxwellSchemeId, state: MaxwellState2D, grid: Grid) -> Field:
    """Discrete divergence of E that the scheme keeps constant in time.

    Sequential-explicit schemes preserve D'_x Ex + D'_y Ey, the divergence
    built from the E-update stencils; the stationarity-preserving reference
    scheme preserves the vertex divergence. Index i of the result holds the
    value around the backward vertex/cell of i for the staggered layouts.
    """
    check_layouts(scheme, state)
    g = grid.ghost
    if scheme is S.UPWIND_SPLIT:
        raise NoInvolutionError("The dimensionally split upwind scheme preserves no involution")
    if scheme is S.STAT_PRES_REFERENCE:
        vertex = operators_for(S.YEE_COLLOCATED_EXTENDED, grid.spacing)
        values = vertex.d(0, state.ex.data, g) + vertex.d(1, state.ey.data, g)
        return Field.from_interior(grid, values, Layout.CELL)
    ops = operators_for(_sequential_family_scheme(scheme), grid.spacing)
    values = ops.dp(0, state.ex.data, g) + ops.dp(1, state.ey.data, g)
    layout = Layout.NODE if scheme is S.YEE_EXTENDED_STAGGERED else Layout.CELL
    return Field.from_interior(grid, values, layout)


def stationary_curl(scheme: MaxwellSchemeId, state: MaxwellState2D, grid: Grid) -> Field:
    """D_x Ey - D_y Ex: vanishes exactly on the scheme's stationary E fields."""
    check_layouts(scheme, state)
    if not scheme.is_sequential:
        raise NoInvolutionError(f"{scheme.value} has no sequential curl operator")
    g = grid.ghost
    ops = operators_for(_sequential_family_scheme(scheme), grid.spacing)
    values = ops.d(0, state.ey.data, g) - ops.d(1, state.ex.data, g)
    return Field.from_interior(grid, values, state.bz.layout)


def _sequential_family_scheme(scheme: MaxwellSchemeId) -> MaxwellSchemeId:
    # the explicit rewrite shares the operators of its sequential form
    return S.YEE_COLLOCATED if scheme is S.YEE_COLLOCATED_EXPLICIT else scheme


# --- three dimensions --------------------------------------------------------


def init_state_3d(
    grid: Grid,
    b: tuple[Callable[..., np.ndarray | float], ...],
    e: tuple[Callable[..., np.ndarray | float], ...],
) -> MaxwellState3D:
    fields = [init_from(fn, grid, Layout.NODE) for fn in b]
    fields += [init_from(fn, grid, Layout.CELL) for fn in e]
    state = MaxwellState3D(*fields)
    for f in fields:
        fill_ghosts(f, grid)
    return state


def step_3d(state: MaxwellState3D, grid: Grid, dt: float) -> MaxwellState3D:
    """B^{n+1} = B - dt curl_D E;  E^{n+1} = E + dt curl_D' B^{n+1}."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if grid.ndim != 3:
        raise LayoutError(f"The 3D scheme needs a 3D grid, got cells {grid.cells}")
    ops = operators_for(S.YEE_EXTENDED_3D, grid.spacing)
    g = grid.ghost
    new = state.copy()
    e = [f.data for f in state.e]
    for a, f in enumerate(new.b):
        b1, b2 = (a + 1) % 3, (a + 2) % 3
        f.data[grid.interior] -= dt * (ops.d(b1, e[b2], g) - ops.d(b2, e[b1], g))
        fill_ghosts(f, grid)
    b = [f.data for f in new.b]
    for a, f in enumerate(new.e):
        b1, b2 = (a + 1) % 3, (a + 2) % 3
        f.data[grid.interior] += dt * (ops.dp(b1, b[b2], g) - ops.dp(b2, b[b1], g))
        fill_ghosts(f, grid)
    return new


def discrete_involution_3d(state: MaxwellState3D, grid: Grid) -> tuple[Field, Field]:
    """(div' E, div B): both stay constant under step_3d.

    Index i of div' E holds the vertex behind cell i; index i of div B holds
    the cell ahead of vertex i.
    """
    ops = operators_for(S.YEE_EXTENDED_3D, grid.spacing)
    g = grid.ghost
    div_e = sum(ops.dp(a, f.data, g) for a, f in enumerate(state.e))
    div_b = sum(ops.d(a, f.data, g) for a, f in enumerate(state.b))
    return (
        Field.from_interior(grid, np.asarray(div_e), Layout.NODE),
        Field.from_interior(grid, np.asarray(div_b), Layout.CELL),
    )
