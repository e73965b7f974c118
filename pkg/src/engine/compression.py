"""One-dimensional conservative advection dq/dt + d(U(x) q)/dx = 0 with
spatially varying velocity: a comparison bed for how numerical fluxes treat
the compressive part q dU/dx.

All arrays are periodic. Edge index i denotes the edge i + 1/2 between
cells i and i + 1; edge velocities U_edges[i] live there as well.

Pure functions. No I/O.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.config import settings
from src.engine.errors import CompressionCollapseError

logger = logging.getLogger(__name__)


class CompressionFlux(Enum):
    LEVEQUE_CELL = "leveque-cell"  # cell velocities, upwind of the product U q
    ROE = "roe"  # cell velocities, locally linearized
    EDGE_UPWIND = "edge-upwind"  # edge velocities, pure upwind
    LAGRANGE_PROJECTION = "lagrange-projection"  # edge velocities, divided by L_i


CELL_BASED = (CompressionFlux.LEVEQUE_CELL, CompressionFlux.ROE)


@dataclass(frozen=True)
class EdgeVelocityProfile:
    """Velocity samples at edges (x_{i+1/2}) or at cell centres."""

    values: np.ndarray
    at_edges: bool = True

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Velocity profile must be finite")

    @classmethod
    def sample(
        cls, fn: Callable[[np.ndarray], np.ndarray], n: int, dx: float, at_edges: bool = True
    ) -> "EdgeVelocityProfile":
        x = (np.arange(n) + (1.0 if at_edges else 0.5)) * dx
        return cls(np.asarray(fn(x), dtype=float), at_edges)


def _right(a: np.ndarray) -> np.ndarray:
    return np.roll(a, -1)


def leveque_cell_fluxes(q: np.ndarray, u_cells: np.ndarray) -> np.ndarray:
    mean = 0.5 * (u_cells + _right(u_cells))
    return np.where(mean >= 0, u_cells * q, _right(u_cells) * _right(q))


def roe_average(q: np.ndarray, u_cells: np.ndarray, average: str = "roe") -> np.ndarray:
    """Edge average of U; "roe" satisfies U_{i+1} q_{i+1} - U_i q_i = Ubar (q_{i+1} - q_i)."""
    mean = 0.5 * (u_cells + _right(u_cells))
    if average == "arithmetic":
        return mean
    if average != "roe":
        raise ValueError(f"Unknown Roe average {average!r}, expected 'roe' or 'arithmetic'")
    dq = _right(q) - q
    df = _right(u_cells) * _right(q) - u_cells * q
    scale = np.maximum(np.abs(q) + np.abs(_right(q)), 1e-300)
    degenerate = np.abs(dq) <= 1e-14 * scale
    safe = np.where(degenerate, 1.0, dq)
    return np.where(degenerate, mean, df / safe)


def roe_fluxes(q: np.ndarray, u_cells: np.ndarray, average: str = "roe") -> np.ndarray:
    u_bar = roe_average(q, u_cells, average)
    central = 0.5 * (u_cells * q + _right(u_cells) * _right(q))
    return central - 0.5 * np.abs(u_bar) * (_right(q) - q)


def edge_upwind_fluxes(q: np.ndarray, u_edges: np.ndarray) -> np.ndarray:
    return np.where(u_edges >= 0, u_edges * q, u_edges * _right(q))


def lagrange_lengths(u_edges: np.ndarray, dt: float, dx: float) -> np.ndarray:
    """L_i = 1 + dt (U_{i+1/2} - U_{i-1/2}) / dx; must stay above the denominator floor."""
    lengths = 1.0 + dt * (u_edges - np.roll(u_edges, 1)) / dx
    floor = settings.denominator_floor
    if np.min(lengths) <= floor:
        i = int(np.argmin(lengths))
        raise CompressionCollapseError(
            f"Lagrangian cell length {lengths[i]:.6g} <= {floor} in cell {i}; reduce dt"
        )
    return lengths


def lagrange_projection_fluxes(
    q: np.ndarray, u_edges: np.ndarray, dt: float, dx: float
) -> np.ndarray:
    w = q / lagrange_lengths(u_edges, dt, dx)
    return 0.5 * u_edges * (w + _right(w)) - 0.5 * np.abs(u_edges) * (_right(w) - w)


def fluxes(
    q: np.ndarray,
    profile: EdgeVelocityProfile,
    variant: CompressionFlux,
    dt: float = 0.0,
    dx: float = 1.0,
    average: str = "roe",
) -> np.ndarray:
    """Numerical flux at every edge for the chosen variant."""
    if dx <= 0:
        raise ValueError(f"dx must be positive, got {dx}")
    if (variant in CELL_BASED) == profile.at_edges:
        where = "edges" if profile.at_edges else "cells"
        raise ValueError(f"{variant.value} cannot use velocities sampled at {where}")
    u = profile.values
    if variant is CompressionFlux.LEVEQUE_CELL:
        return leveque_cell_fluxes(q, u)
    if variant is CompressionFlux.ROE:
        return roe_fluxes(q, u, average)
    if variant is CompressionFlux.EDGE_UPWIND:
        return edge_upwind_fluxes(q, u)
    return lagrange_projection_fluxes(q, u, dt, dx)


def flux_leveque_cellU(q: np.ndarray, u_cells: np.ndarray, i_edge: int) -> float:  # noqa: N802
    return float(leveque_cell_fluxes(q, u_cells)[i_edge])


def flux_roe_nonconst(
    q: np.ndarray, u_cells: np.ndarray, i_edge: int, average: str = "roe"
) -> float:
    return float(roe_fluxes(q, u_cells, average)[i_edge])


def flux_edge_upwind(q: np.ndarray, u_edges: np.ndarray, i_edge: int) -> float:
    return float(edge_upwind_fluxes(q, u_edges)[i_edge])


def flux_lagrange_projection(
    q: np.ndarray, u_edges: np.ndarray, dt: float, dx: float, i_edge: int
) -> float:
    return float(lagrange_projection_fluxes(q, u_edges, dt, dx)[i_edge])


def flux_relaxation_pressureless(
    q_left: tuple[float, float], q_right: tuple[float, float], a: float
) -> np.ndarray:
    """Relaxation flux (rho* u*, rho* u*^2) for pressureless gas dynamics.

    q_left and q_right are (rho, u); a is the relaxation speed (density x speed).
    """
    if a <= 0:
        raise ValueError(f"Relaxation speed must be positive, got {a}")
    (rho_l, u_l), (rho_r, u_r) = q_left, q_right
    u_star = 0.5 * (u_l + u_r)
    rho_up = rho_l if u_star > 0 else rho_r
    denominator = 1.0 + rho_up / (2.0 * a) * (u_r - u_l)
    if denominator <= 0:
        raise CompressionCollapseError(
            f"Relaxation speed a={a} too small: denominator {denominator:.6g} for "
            f"velocity jump {u_r - u_l:.6g}"
        )
    rho_star = rho_up / denominator
    return np.array([rho_star * u_star, rho_star * u_star * u_star])


def ode_compression_update(q: np.ndarray, u_cells: np.ndarray, dt: float, dx: float) -> np.ndarray:
    """Upwind advection, backward Euler on the compression term q dU/dx."""
    if dx <= 0:
        raise ValueError(f"dx must be positive, got {dx}")
    backward = (q - np.roll(q, 1)) / dx
    forward = (_right(q) - q) / dx
    advection = np.where(u_cells >= 0, u_cells * backward, u_cells * forward)
    denominator = 1.0 + dt * (_right(u_cells) - np.roll(u_cells, 1)) / (2.0 * dx)
    if np.min(denominator) <= 0:
        raise CompressionCollapseError(
            f"Compression denominator {np.min(denominator):.6g} <= 0; reduce dt"
        )
    return (q - dt * advection) / denominator


def advect_conservative(
    q: np.ndarray,
    profile: EdgeVelocityProfile,
    variant: CompressionFlux,
    dt: float,
    dx: float,
    steps: int,
    average: str = "roe",
) -> np.ndarray:
    """Run `steps` conservative updates q_i -= dt/dx (F_{i+1/2} - F_{i-1/2})."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    q = np.array(q, dtype=float)
    for _ in range(steps):
        f = fluxes(q, profile, variant, dt, dx, average)
        q = q - dt / dx * (f - np.roll(f, 1))
    logger.debug("Advected %d steps with %s", steps, variant.value)
    return q
