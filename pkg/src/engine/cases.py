"""Initial data for the Euler experiments: shock tubes, vortices, shear layer.

Every case is a primitive-variable profile (rho, u, v, p)(x, y) sampled at
cell centres, ghosts included, so the built state doubles as the frozen
snapshot for fixed walls.

Pure functions. No I/O.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.engine.boundaries import init_from
from src.engine.errors import ConfigError
from src.engine.euler import fill_state, prim_to_cons
from src.models.grid import BoundaryKind, Grid, Layout
from src.models.schemes import CaseId
from src.models.states import ConservedState, PrimitiveState, RiemannProblem, RiemannState

logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, ...]]

INTERFACE = 0.5

SHOCK_TUBES: dict[CaseId, RiemannProblem] = {
    CaseId.SOD: RiemannProblem(RiemannState(1.0, 0.0, 1.0), RiemannState(0.125, 0.0, 0.1)),
    CaseId.LAX: RiemannProblem(RiemannState(0.445, 0.698, 3.528), RiemannState(0.5, 0.0, 0.571)),
    CaseId.LEVEQUE: RiemannProblem(RiemannState(3.0, 0.9, 3.0), RiemannState(1.0, 0.9, 1.0)),
}

VORTICES = (CaseId.GRESHO_VORTEX, CaseId.SMOOTH_VORTEX)

SMOOTH_ALPHA = 20.0
SMOOTH_V0 = SMOOTH_ALPHA**2 / 0.13


@dataclass(frozen=True)
class CaseSpec:
    """Domain and default run parameters of one experiment."""

    description: str
    nx: int
    ny: int
    lx: float
    ly: float
    bc: tuple[BoundaryKind, BoundaryKind]
    t_end: float
    cfl: float
    mach: float | None = None

    def grid(self, nx: int | None = None, ny: int | None = None) -> Grid:
        return Grid.uniform(
            nx or self.nx, ny or self.ny, self.lx, self.ly, bc_x=self.bc[0], bc_y=self.bc[1]
        )


_TUBE_BC = (BoundaryKind.FROZEN, BoundaryKind.PERIODIC)
_PERIODIC = (BoundaryKind.PERIODIC, BoundaryKind.PERIODIC)

CASES: dict[CaseId, CaseSpec] = {
    CaseId.SOD: CaseSpec("Sod shock tube", 1000, 2, 1.0, 1.0, _TUBE_BC, 0.2, 0.65),
    CaseId.LAX: CaseSpec("Lax shock tube", 1000, 2, 1.0, 1.0, _TUBE_BC, 0.1, 0.65),
    CaseId.LEVEQUE: CaseSpec(
        "Shock tube with transonic rarefaction", 1000, 2, 1.0, 1.0, _TUBE_BC, 0.1, 0.65
    ),
    CaseId.GRESHO_VORTEX: CaseSpec(
        "Stationary piecewise-linear vortex", 50, 50, 1.0, 1.0, _PERIODIC, 1.0, 0.9, 1e-1
    ),
    CaseId.SMOOTH_VORTEX: CaseSpec(
        "Stationary smooth vortex", 100, 100, 1.0, 1.0, _PERIODIC, 0.05, 0.9, 0.3
    ),
    CaseId.KELVIN_HELMHOLTZ: CaseSpec(
        "Shear layer with sinusoidal perturbation",
        200, 100, 2.0, 1.0, (BoundaryKind.PERIODIC, BoundaryKind.FROZEN), 5.0, 0.7,
    ),
}

KH_FULL_SCALE = (2000, 1000)


# --- profiles --------------------------------------------------------------------------


def _shock_tube(problem: RiemannProblem) -> Profile:
    def profile(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, ...]:
        left = x < INTERFACE
        a, b = problem.left, problem.right
        return (
            np.where(left, a.rho, b.rho),
            np.where(left, a.u, b.u),
            np.zeros_like(x),
            np.where(left, a.p, b.p),
        )

    return profile


def _polar(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dx, dy = x - 0.5, y - 0.5
    r = np.hypot(dx, dy)
    safe = np.where(r > 0, r, 1.0)
    # unit tangent (-sin phi, cos phi), zero at the centre
    return r, np.where(r > 0, -dy / safe, 0.0), np.where(r > 0, dx / safe, 0.0)


def gresho_velocity(r: np.ndarray) -> np.ndarray:
    return np.where(r < 0.2, 5.0 * r, np.where(r < 0.4, 2.0 - 5.0 * r, 0.0))


def gresho_pressure(r: np.ndarray, mach: float, gamma: float = 1.4) -> np.ndarray:
    p0 = 1.0 / (gamma * mach * mach) - 0.5
    safe = np.where(r > 0, r, 1.0)
    inner = p0 + 12.5 * r * r
    ring = p0 + 4.0 * np.log(5.0 * safe) + 4.0 - 20.0 * r + 12.5 * r * r
    outer = p0 + 4.0 * math.log(2.0) - 2.0
    return np.where(r < 0.2, inner, np.where(r < 0.4, ring, outer))


def smooth_velocity(r: np.ndarray) -> np.ndarray:
    return SMOOTH_V0 * r * r * np.exp(-SMOOTH_ALPHA * r)


def smooth_pressure(r: np.ndarray, mach: float, gamma: float = 1.4) -> np.ndarray:
    """Radial equilibrium dp/dr = v^2 / r integrated from the centre."""
    a, ar = SMOOTH_ALPHA, SMOOTH_ALPHA * r
    p0 = 20.0 / (gamma * mach * mach)
    bracket = 3.0 + np.exp(-2.0 * ar) * (-3.0 - 2.0 * ar * (3.0 + ar * (3.0 + 2.0 * ar)))
    return p0 + SMOOTH_V0**2 / (8.0 * a**4) * bracket


def _vortex(
    velocity: Callable[[np.ndarray], np.ndarray],
    press: Callable[[np.ndarray, float, float], np.ndarray],
    mach: float,
    gamma: float,
) -> Profile:
    def profile(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, ...]:
        r, tx, ty = _polar(x, y)
        v_phi = velocity(r)
        return np.ones_like(x), v_phi * tx, v_phi * ty, press(r, mach, gamma)

    return profile


def _kelvin_helmholtz(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, ...]:
    lower = y < 0.5
    return (
        np.where(lower, 1.001, 0.999),
        np.where(lower, 0.1, -0.1),
        1e-3 * np.sin(2.0 * np.pi * x),
        np.full_like(x, 5.0),
    )


def case_profile(case: CaseId, mach: float | None = None, gamma: float | None = None) -> Profile:
    gamma = settings.gamma if gamma is None else gamma
    if case in SHOCK_TUBES:
        return _shock_tube(riemann_problem(case, gamma))
    if case is CaseId.KELVIN_HELMHOLTZ:
        return _kelvin_helmholtz
    if case in VORTICES:
        mach = CASES[case].mach if mach is None else mach
        if mach is None or mach <= 0:
            raise ConfigError(f"Vortex Mach number must be positive, got {mach}")
        if case is CaseId.GRESHO_VORTEX:
            return _vortex(gresho_velocity, gresho_pressure, mach, gamma)
        return _vortex(smooth_velocity, smooth_pressure, mach, gamma)
    raise ConfigError(f"Unknown case {case!r}")


def riemann_problem(case: CaseId, gamma: float | None = None) -> RiemannProblem:
    if case not in SHOCK_TUBES:
        raise ConfigError(f"{case.value} is not a shock tube")
    base = SHOCK_TUBES[case]
    return RiemannProblem(base.left, base.right, settings.gamma if gamma is None else gamma)


# --- building states -------------------------------------------------------------------


def _check_domain(case: CaseId, grid: Grid) -> None:
    spec = CASES[case]
    lx, ly = grid.nx * grid.dx, grid.ny * grid.dy
    if grid.ndim != 2:
        raise ConfigError(f"{case.value} needs a 2D grid, got {grid.ndim}D")
    if not (math.isclose(lx, spec.lx) and math.isclose(ly, spec.ly)):
        raise ConfigError(
            f"{case.value} lives on [0, {spec.lx}] x [0, {spec.ly}], grid covers {lx:g} x {ly:g}"
        )
    if grid.origin[:2] != (0.0, 0.0):
        raise ConfigError(f"{case.value} expects the grid origin at (0, 0), got {grid.origin[:2]}")


def build_case(
    case: CaseId, grid: Grid, mach: float | None = None, gamma: float | None = None
) -> ConservedState:
    """Cell-sampled conserved state of an experiment with ghosts filled.

    Frozen ghosts hold the initial data, so a copy of the result serves as
    the snapshot for fixed boundaries.
    """
    if not isinstance(case, CaseId):
        raise ConfigError(f"Unknown case {case!r}")
    gamma = settings.gamma if gamma is None else gamma
    _check_domain(case, grid)
    profile = case_profile(case, mach, gamma)

    parts = [
        init_from(lambda x, y, k=k: profile(x, y)[k], grid, Layout.CELL, normal_axis=axis)
        for k, axis in enumerate((None, 0, 1, None))
    ]
    if np.any(parts[3].data <= 0):
        raise ConfigError(
            f"{case.value} has non-positive pressure (min {parts[3].data.min():.6g}); "
            f"lower the Mach number"
        )
    state = prim_to_cons(PrimitiveState(*parts, gamma=gamma))
    fill_state(state, grid, frozen=state.copy())
    logger.info("Built %s on %s grid", case.value, grid.cells)
    return state


def list_cases() -> list[tuple[str, CaseSpec]]:
    return [(case.value, spec) for case, spec in CASES.items()]
