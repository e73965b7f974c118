"""Collocated all-speed solver for the 2D Euler equations.

Edge fluxes combine a multi-dimensionally averaged central flux, upwind
diffusion for the advection part only, and a compressive denominator
1 + dt * (edge divergence). The update is sequential-explicit: momentum
first, then density and energy with the new momentum.

Pure functions. No I/O.
"""

import logging
from collections.abc import Iterator

import numpy as np

from src.config import settings
from src.engine.boundaries import fill_ghosts
from src.engine.errors import CompressionCollapseError, PositivityError, SolverError
from src.engine.operators import operators_for
from src.engine.stencils import BracketExpr, BracketOp, bracket, evaluate
from src.models.grid import Field, Grid, Layout
from src.models.schemes import FluxVariant, MaxwellSchemeId
from src.models.states import ConservedState, EdgeFluxes, PrimitiveState

logger = logging.getLogger(__name__)

JUMP, SUM = BracketOp.JUMP_HALF, BracketOp.SUM_HALF


# --- equation of state ---------------------------------------------------------


def pressure(
    rho: np.ndarray, mx: np.ndarray, my: np.ndarray, e: np.ndarray, gamma: float
) -> np.ndarray:
    """p = (gamma - 1) (e - |m|^2 / (2 rho))"""
    return (gamma - 1.0) * (e - 0.5 * (mx * mx + my * my) / rho)


def cons_to_prim(state: ConservedState) -> PrimitiveState:
    rho = state.rho.data
    if np.any(rho <= 0):
        raise PositivityError(f"Non-positive density, min rho = {rho.min():.6g}")
    p = pressure(rho, state.mx.data, state.my.data, state.e.data, state.gamma)
    if np.any(p <= 0):
        raise PositivityError(f"Non-positive pressure, min p = {p.min():.6g}")
    return PrimitiveState(
        Field(Layout.CELL, rho.copy()),
        Field(Layout.CELL, state.mx.data / rho, normal_axis=0),
        Field(Layout.CELL, state.my.data / rho, normal_axis=1),
        Field(Layout.CELL, p),
        state.gamma,
    )


def prim_to_cons(prim: PrimitiveState) -> ConservedState:
    rho, u, v, p = prim.rho.data, prim.u.data, prim.v.data, prim.p.data
    if np.any(rho <= 0) or np.any(p <= 0):
        raise PositivityError("prim_to_cons needs rho > 0 and p > 0")
    e = p / (prim.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return ConservedState(
        Field(Layout.CELL, rho.copy()),
        Field(Layout.CELL, rho * u, normal_axis=0),
        Field(Layout.CELL, rho * v, normal_axis=1),
        Field(Layout.CELL, e),
        prim.gamma,
    )


def physical_flux(q: np.ndarray, axis: int, gamma: float = 1.4) -> np.ndarray:
    """Flux along `axis` of conserved vectors q with components on the leading axis."""
    rho, mx, my, e = q
    p = pressure(rho, mx, my, e, gamma)
    un = (mx if axis == 0 else my) / rho
    flux = np.stack([rho * un, mx * un, my * un, (e + p) * un])
    flux[1 + axis] += p
    return flux


# --- edge fluxes -----------------------------------------------------------------


def _face_flux(
    q: np.ndarray,
    axis: int,
    grid: Grid,
    dt: float,
    gamma: float,
    variant: FluxVariant,
) -> np.ndarray:
    """Fluxes through the faces normal to `axis`, one more than cells along it."""
    g = grid.ghost
    other = 1 - axis
    h_n, h_t = grid.spacing[axis], grid.spacing[other]
    extend = [(0, 0), (0, 0)]
    extend[axis] = (1, 0)

    def at_faces(expr: BracketExpr, data: np.ndarray) -> np.ndarray:
        return evaluate(expr, data, g, extend=extend)

    rho = q[0]
    un = q[1 + axis] / rho
    ut = q[1 + other] / rho
    f = physical_flux(q, axis, gamma)

    if variant is FluxVariant.BASIC:
        average = bracket((axis, SUM), norm=2.0)
    else:
        average = bracket((axis, SUM), (other, BracketOp.DOUBLE_SUM), norm=8.0)
    u_star = np.abs(at_faces(bracket((axis, SUM), norm=2.0), un))
    jump = bracket((axis, JUMP))
    numerator = np.stack(
        [at_faces(average, f[k]) - 0.5 * u_star * at_faces(jump, q[k]) for k in range(4)]
    )

    if variant is FluxVariant.NO_DENOMINATOR:
        return numerator
    if variant is FluxVariant.BASIC:
        normal = at_faces(jump, un) / h_n
    else:
        normal = at_faces(bracket((axis, JUMP), (other, BracketOp.DOUBLE_SUM)), un) / (4 * h_n)
    tangential = at_faces(bracket((axis, SUM), (other, BracketOp.JUMP_WIDE)), ut) / (4 * h_t)
    denominator = 1.0 + dt * (normal + tangential)

    floor = settings.denominator_floor
    if np.min(denominator) <= floor:
        idx = np.unravel_index(np.argmin(denominator), denominator.shape)
        raise CompressionCollapseError(
            f"Compressive denominator {denominator[idx]:.6g} <= {floor} at axis-{axis} face "
            f"{tuple(int(i) for i in idx)}; reduce the CFL number"
        )
    return numerator / denominator


def _stack(rho: Field, mx: Field, my: Field, e: Field) -> np.ndarray:
    return np.stack([rho.data, mx.data, my.data, e.data])


def edge_fluxes(
    state: ConservedState, grid: Grid, dt: float, variant: FluxVariant = FluxVariant.EXTENDED
) -> EdgeFluxes:
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    q = state.stacked()
    return EdgeFluxes(
        _face_flux(q, 0, grid, dt, state.gamma, variant),
        _face_flux(q, 1, grid, dt, state.gamma, variant),
    )


def extended_flux_x(
    prim: PrimitiveState, cons: ConservedState, grid: Grid, dt: float,
    variant: FluxVariant = FluxVariant.EXTENDED,
) -> np.ndarray:
    """x-face fluxes, shape (4, nx + 1, ny); index i is face i - 1/2.

    Velocities are taken from prim, which must describe the same state as cons.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    _check_matching(prim, cons)
    return _face_flux(cons.stacked(), 0, grid, dt, cons.gamma, variant)


def extended_flux_y(
    prim: PrimitiveState, cons: ConservedState, grid: Grid, dt: float,
    variant: FluxVariant = FluxVariant.EXTENDED,
) -> np.ndarray:
    """y-face fluxes, shape (4, nx, ny + 1); index j is face j - 1/2."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    _check_matching(prim, cons)
    return _face_flux(cons.stacked(), 1, grid, dt, cons.gamma, variant)


def _check_matching(prim: PrimitiveState, cons: ConservedState) -> None:
    if prim.rho.data.shape != cons.rho.data.shape:
        raise ValueError(
            f"Primitive and conserved shapes differ: {prim.rho.data.shape} vs {cons.rho.data.shape}"
        )


def divergence(fluxes: EdgeFluxes, grid: Grid) -> np.ndarray:
    fx, fy = fluxes.fx, fluxes.fy
    return (fx[:, 1:, :] - fx[:, :-1, :]) / grid.dx + (fy[:, :, 1:] - fy[:, :, :-1]) / grid.dy


def rhs(
    rho: Field, mx: Field, my: Field, e: Field, grid: Grid, dt: float,
    gamma: float = 1.4, variant: FluxVariant = FluxVariant.EXTENDED,
) -> np.ndarray:
    """Flux divergence per cell, shape (4, nx, ny); q^{n+1} = q^n - dt * rhs.

    The fields may come from different time levels; velocities are formed
    from whatever is passed in.
    """
    q = _stack(rho, mx, my, e)
    fluxes = EdgeFluxes(
        _face_flux(q, 0, grid, dt, gamma, variant),
        _face_flux(q, 1, grid, dt, gamma, variant),
    )
    return divergence(fluxes, grid)


# --- time stepping -----------------------------------------------------------------


def check_admissible(state: ConservedState, grid: Grid) -> None:
    rho = state.rho.interior(grid)
    if np.any(rho <= 0):
        idx = np.unravel_index(np.argmin(rho), rho.shape)
        raise PositivityError(f"Density {rho[idx]:.6g} <= 0 at cell {tuple(int(i) for i in idx)}")
    eint = state.e.interior(grid) - 0.5 * (
        state.mx.interior(grid) ** 2 + state.my.interior(grid) ** 2
    ) / rho
    if np.any(eint <= 0):
        idx = np.unravel_index(np.argmin(eint), eint.shape)
        raise PositivityError(
            f"Internal energy {eint[idx]:.6g} <= 0 at cell {tuple(int(i) for i in idx)}"
        )


def fill_state(state: ConservedState, grid: Grid, frozen: ConservedState | None = None) -> None:
    for k, f in enumerate(state.fields):
        fill_ghosts(f, grid, frozen=frozen.fields[k] if frozen is not None else None)


def step_euler(
    state: ConservedState,
    grid: Grid,
    dt: float,
    variant: FluxVariant = FluxVariant.EXTENDED,
    frozen: ConservedState | None = None,
) -> ConservedState:
    """One sequential-explicit step. Ghosts of `state` must be filled."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    new = state.copy()
    inner = grid.interior
    snap = frozen.fields if frozen is not None else (None,) * 4

    r = rhs(state.rho, state.mx, state.my, state.e, grid, dt, state.gamma, variant)
    new.mx.data[inner] -= dt * r[1]
    new.my.data[inner] -= dt * r[2]
    fill_ghosts(new.mx, grid, frozen=snap[1])
    fill_ghosts(new.my, grid, frozen=snap[2])

    r = rhs(state.rho, new.mx, new.my, state.e, grid, dt, state.gamma, variant)
    new.rho.data[inner] -= dt * r[0]
    new.e.data[inner] -= dt * r[3]
    check_admissible(new, grid)
    fill_ghosts(new.rho, grid, frozen=snap[0])
    fill_ghosts(new.e, grid, frozen=snap[3])
    return new


def compute_dt(state: ConservedState, grid: Grid, cfl: float) -> float:
    """cfl * h / max(|u| + |v| + c sqrt(2 / gamma)) with h = min(dx, dy)."""
    if not 0 < cfl <= 1:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    rho = state.rho.interior(grid)
    mx, my, e = state.mx.interior(grid), state.my.interior(grid), state.e.interior(grid)
    p = pressure(rho, mx, my, e, state.gamma)
    c = np.sqrt(state.gamma * np.maximum(p, 0.0) / rho)
    speed = np.abs(mx / rho) + np.abs(my / rho) + c * np.sqrt(2.0 / state.gamma)
    s_max = float(np.max(speed))
    if not np.isfinite(s_max):
        raise SolverError("Non-finite signal speed while computing dt")
    if s_max == 0.0:
        raise SolverError("All signal speeds vanish; dt is unbounded")
    return cfl * min(grid.spacing) / s_max


# --- low Mach diagnostics -------------------------------------------------------------


def node_divergence(prim: PrimitiveState, grid: Grid, undivided: bool = False) -> Field:
    """Vertex divergence {[u]_x}_y / dx + {[v]_y}_x / dy; index i is vertex i + 1/2.

    [.] is the jump across the vertex and {.} the average over the two cells
    along the other axis. With `undivided` the 1/dx and 1/dy factors are
    dropped, the form used by the low Mach norms.
    """
    spacing = (1.0,) * grid.ndim if undivided else grid.spacing
    ops = operators_for(MaxwellSchemeId.YEE_COLLOCATED_EXTENDED, spacing)
    g = grid.ghost
    values = ops.d(0, prim.u.data, g) + ops.d(1, prim.v.data, g)
    return Field.from_interior(grid, values, Layout.NODE)


def rescaled_pressure_gradient_norm(prim: PrimitiveState, grid: Grid, mach: float) -> float:
    """(1/N) sum |[M^2 p]_{i+-1}| / 2"""
    diff = evaluate(bracket((0, BracketOp.JUMP_WIDE), norm=2.0), prim.p.data, grid.ghost)
    return float(np.mean(np.abs(mach * mach * diff)))


def evolve(
    state: ConservedState,
    grid: Grid,
    t_end: float,
    cfl: float,
    variant: FluxVariant = FluxVariant.EXTENDED,
    frozen: ConservedState | None = None,
    max_steps: int | None = None,
) -> Iterator[tuple[float, ConservedState]]:
    """Yield (t, state) at t = 0 and after every step; the last step lands on t_end."""
    if t_end < 0:
        raise ValueError(f"t_end must be non-negative, got {t_end}")
    t, steps = 0.0, 0
    yield t, state
    while t < t_end * (1.0 - 1e-14):
        if max_steps is not None and steps >= max_steps:
            raise SolverError(f"Step limit {max_steps} reached at t={t:.6g} < {t_end}")
        dt = min(compute_dt(state, grid, cfl), t_end - t)
        state = step_euler(state, grid, dt, variant, frozen)
        t += dt
        steps += 1
        logger.debug("step %d t=%.6g dt=%.3g", steps, t, dt)
        yield t, state
    logger.info("Reached t=%.6g after %d steps", t, steps)
