"""Linearized von Neumann analysis of the all-speed Euler scheme.

The fluxes are linearized around a constant state (rho, u, v, p); the
compressive denominator contributes its first-order expansion. The
sequential structure carries over: momentum rows use the old state,
density and energy rows see the updated momentum.

Pure functions. No I/O.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.engine.spectral import beta_grid, bisect_bound, spectral_radius

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Background:
    """Constant state the scheme is linearized around."""

    rho: float
    u: float
    v: float
    p: float
    gamma: float = 1.4

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ValueError(f"Background density must be positive, got {self.rho}")
        if self.p < 0:
            raise ValueError(f"Background pressure must be non-negative, got {self.p}")

    @classmethod
    def from_sound_speed(
        cls, u: float, v: float, c: float, gamma: float = 1.4, rho: float = 1.0
    ) -> "Background":
        return cls(rho, u, v, rho * c * c / gamma, gamma)

    @property
    def energy(self) -> float:
        return self.p / (self.gamma - 1.0) + 0.5 * self.rho * (self.u**2 + self.v**2)

    @property
    def enthalpy(self) -> float:
        return (self.energy + self.p) / self.rho

    @property
    def c(self) -> float:
        return math.sqrt(self.gamma * self.p / self.rho)

    def flux(self, axis: int) -> np.ndarray:
        un = self.u if axis == 0 else self.v
        f = np.array([self.rho * un, self.rho * self.u * un, self.rho * self.v * un,
                      (self.energy + self.p) * un])
        f[1 + axis] += self.p
        return f

    def jacobian(self, axis: int) -> np.ndarray:
        g, u, v, h = self.gamma, self.u, self.v, self.enthalpy
        k = 0.5 * (g - 1.0) * (u * u + v * v)
        if axis == 0:
            return np.array([
                [0.0, 1.0, 0.0, 0.0],
                [k - u * u, (3.0 - g) * u, -(g - 1.0) * v, g - 1.0],
                [-u * v, v, u, 0.0],
                [u * (k - h), h - (g - 1.0) * u * u, -(g - 1.0) * u * v, g * u],
            ])
        return np.array([
            [0.0, 0.0, 1.0, 0.0],
            [-u * v, v, u, 0.0],
            [k - v * v, -(g - 1.0) * u, (3.0 - g) * v, g - 1.0],
            [v * (k - h), -(g - 1.0) * u * v, h - (g - 1.0) * v * v, g * v],
        ])

    @property
    def grad_u(self) -> np.ndarray:
        return np.array([-self.u / self.rho, 1.0 / self.rho, 0.0, 0.0])

    @property
    def grad_v(self) -> np.ndarray:
        return np.array([-self.v / self.rho, 0.0, 1.0 / self.rho, 0.0])


def euler_linearized_matrix(
    ubar: float,
    vbar: float,
    pbar: float,
    rhobar: float,
    gamma: float,
    dt: float,
    dx: float,
    beta: Sequence[float] | Sequence[np.ndarray],
    dy: float | None = None,
    with_denominator: bool = True,
) -> np.ndarray:
    """Amplification matrix of the linearized scheme, shape (..., 4, 4)."""
    q = Background(rhobar, ubar, vbar, pbar, gamma)
    dy = dx if dy is None else dy
    bx, by = (np.asarray(b, dtype=float) for b in beta)
    tx, ty = np.exp(1j * bx), np.exp(1j * by)
    cx, cy = np.cos(bx), np.cos(by)
    eye = np.eye(4)

    def outer(scalar: np.ndarray, matrix: np.ndarray) -> np.ndarray:
        return np.asarray(scalar)[..., None, None] * matrix

    def face(axis: int) -> np.ndarray:
        if axis == 0:
            average = (1 + tx) * (1 + cy) / 4
            jump = tx - 1
            div_u = (tx - 1) * (1 + cy) / (2 * dx)
            div_v = (1 + tx) * (ty - 1 / ty) / (4 * dy)
        else:
            average = (1 + cx) * (1 + ty) / 4
            jump = ty - 1
            div_u = (tx - 1 / tx) * (1 + ty) / (4 * dx)
            div_v = (1 + cx) * (ty - 1) / (2 * dy)
        speed = abs(ubar) if axis == 0 else abs(vbar)
        phi = outer(average, q.jacobian(axis)) - 0.5 * speed * outer(jump, eye)
        if with_denominator:
            f = q.flux(axis)
            phi = phi - dt * (
                outer(div_u, np.outer(f, q.grad_u)) + outer(div_v, np.outer(f, q.grad_v))
            )
        return phi

    residual = outer((1 - 1 / tx) / dx, face(0)) + outer((1 - 1 / ty) / dy, face(1))
    momentum = np.broadcast_to(eye, residual.shape).astype(complex)
    momentum[..., 1:3, :] -= dt * residual[..., 1:3, :]

    amp = momentum.copy()
    for row in (0, 3):
        mixed = np.einsum("...k,...kj->...j", residual[..., row, :], momentum)
        amp[..., row, :] = eye[row] - dt * mixed
    return amp


def advective_root(
    ubar: float, vbar: float, dt: float, dx: float, beta: Sequence[float] | Sequence[np.ndarray]
) -> np.ndarray:
    """z0 with characteristic polynomial (z + z0)^4 when the background pressure vanishes."""
    bx, by = (np.asarray(b, dtype=float) for b in beta)
    au, av = abs(ubar), abs(vbar)
    real = (2 * (au + av) * dt - 2 * dx - 2 * dt * (au * np.cos(bx) + av * np.cos(by))) / (2 * dx)
    imag = dt * (
        ubar * (1 + np.cos(by)) * np.sin(bx) + vbar * (1 + np.cos(bx)) * np.sin(by)
    ) / (2 * dx)
    return real + 1j * imag


def closed_form_max_dt(
    ubar: float, vbar: float, cbar: float, gamma: float = 1.4, dx: float = 1.0
) -> float:
    """dx / (|u| + |v| + c sqrt(2 / gamma))"""
    speed = abs(ubar) + abs(vbar) + cbar * math.sqrt(2.0 / gamma)
    return math.inf if speed == 0 else dx / speed


@dataclass(frozen=True)
class EulerStabilityRow:
    ubar: float
    vbar: float
    max_dt: float
    closed_form: float

    @property
    def relative_gap(self) -> float:
        if math.isinf(self.closed_form):
            return 0.0 if math.isinf(self.max_dt) else math.inf
        return abs(self.max_dt - self.closed_form) / self.closed_form


def euler_max_dt(
    ubar: float,
    vbar: float,
    cbar: float,
    gamma: float = 1.4,
    beta_samples: int = 64,
    bisect_tol: float | None = None,
    with_denominator: bool = True,
) -> float:
    """Largest dt/dx (dx = dy = 1) with spectral radius <= 1 + tol at every sampled beta."""
    bisect_tol = settings.bisect_tol if bisect_tol is None else bisect_tol
    tol = settings.euler_unit_circle_tol
    beta = beta_grid(beta_samples, 2)
    guess = closed_form_max_dt(ubar, vbar, cbar, gamma)
    if math.isinf(guess):
        return math.inf

    if cbar == 0.0:
        # (z + z0)^4 is defective; use the root directly
        def stable(dt: float) -> bool:
            return bool(np.max(np.abs(advective_root(ubar, vbar, dt, 1.0, beta))) <= 1.0 + tol)
    else:
        rho = 1.0
        pbar = rho * cbar * cbar / gamma

        def stable(dt: float) -> bool:
            amp = euler_linearized_matrix(
                ubar, vbar, pbar, rho, gamma, dt, 1.0, beta, with_denominator=with_denominator
            )
            return bool(np.max(spectral_radius(amp)) <= 1.0 + tol)

    return bisect_bound(stable, 0.5 * guess, bisect_tol)


def euler_max_dt_map(
    ubar_range: Sequence[float],
    vbar_range: Sequence[float],
    cbar: float,
    gamma: float = 1.4,
    samples: int = 64,
    bisect_tol: float | None = None,
    with_denominator: bool = True,
    threads: int | None = None,
) -> list[EulerStabilityRow]:
    """Maximal stable dt/dx over a (ubar, vbar) grid, next to the closed form."""
    pairs = [(u, v) for u in ubar_range for v in vbar_range]
    workers = max(1, min(threads or settings.max_threads, settings.max_threads))

    def row(pair: tuple[float, float]) -> EulerStabilityRow:
        u, v = pair
        dt = euler_max_dt(u, v, cbar, gamma, samples, bisect_tol, with_denominator)
        return EulerStabilityRow(u, v, dt, closed_form_max_dt(u, v, cbar, gamma))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(row, pairs))
    logger.info("Euler stability map: %d points, c=%s, gamma=%s", len(rows), cbar, gamma)
    return rows
