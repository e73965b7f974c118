"""Exact solution of the one-dimensional Riemann problem for an ideal gas.

The star pressure solves f_L(p) + f_R(p) + (u_R - u_L) = 0, where f_K is
the shock (Rankine-Hugoniot) or rarefaction (isentropic) wave curve. The
similarity solution is then sampled at xi = x / t.

Pure functions. No I/O.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from src.config import settings
from src.engine.errors import SolverError, VacuumError
from src.models.states import RiemannProblem, RiemannState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StarState:
    """Pressure and velocity between the two nonlinear waves."""

    p: float
    u: float
    rho_left: float
    rho_right: float


@dataclass(frozen=True)
class RiemannSample:
    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray


def sound_speed(state: RiemannState, gamma: float) -> float:
    return math.sqrt(gamma * state.p / state.rho)


def _wave_curve(p: float, state: RiemannState, gamma: float) -> float:
    """Velocity change across the wave connecting `state` to pressure p."""
    if p > state.p:
        a = 2.0 / ((gamma + 1.0) * state.rho)
        b = (gamma - 1.0) / (gamma + 1.0) * state.p
        return (p - state.p) * math.sqrt(a / (p + b))
    c = sound_speed(state, gamma)
    return 2.0 * c / (gamma - 1.0) * ((p / state.p) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)


def _star_density(p_star: float, state: RiemannState, gamma: float) -> float:
    ratio = p_star / state.p
    if p_star > state.p:
        g = (gamma - 1.0) / (gamma + 1.0)
        return state.rho * (ratio + g) / (g * ratio + 1.0)
    return state.rho * ratio ** (1.0 / gamma)


def star_state(problem: RiemannProblem) -> StarState:
    """Solve for (p*, u*) to the configured Riemann tolerance."""
    left, right, gamma = problem.left, problem.right, problem.gamma
    c_l, c_r = sound_speed(left, gamma), sound_speed(right, gamma)
    du = right.u - left.u
    if 2.0 * (c_l + c_r) / (gamma - 1.0) <= du:
        raise VacuumError(
            f"Riemann problem creates vacuum: u_R - u_L = {du:.6g} >= "
            f"{2.0 * (c_l + c_r) / (gamma - 1.0):.6g}"
        )

    def residual(p: float) -> float:
        return _wave_curve(p, left, gamma) + _wave_curve(p, right, gamma) + du

    lo = 1e-14 * min(left.p, right.p)
    hi = max(left.p, right.p)
    while residual(hi) < 0:
        hi *= 2.0
    try:
        p_star = float(brentq(residual, lo, hi, xtol=1e-300, rtol=settings.riemann_tol))
    except ValueError as e:
        raise SolverError(f"Star pressure not bracketed in [{lo:.3g}, {hi:.3g}]: {e}") from e

    u_star = 0.5 * (left.u + right.u) + 0.5 * (
        _wave_curve(p_star, right, gamma) - _wave_curve(p_star, left, gamma)
    )
    logger.debug("Star state p*=%.12g u*=%.12g", p_star, u_star)
    return StarState(
        p_star, u_star, _star_density(p_star, left, gamma), _star_density(p_star, right, gamma)
    )


def _sample_side(
    xi: np.ndarray, state: RiemannState, star: StarState, gamma: float, sign: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solution on one side of the contact; sign is -1 for the left wave, +1 for the right."""
    c = sound_speed(state, gamma)
    rho_star = star.rho_left if sign < 0 else star.rho_right
    # Work in the frame where the wave travels to the right.
    s = sign * xi
    u_k, u_star = sign * state.u, sign * star.u

    rho = np.full_like(xi, rho_star)
    u = np.full_like(xi, star.u)
    p = np.full_like(xi, star.p)
    outside: np.ndarray

    if star.p > state.p:
        speed = u_k + c * math.sqrt(
            (gamma + 1.0) / (2.0 * gamma) * star.p / state.p + (gamma - 1.0) / (2.0 * gamma)
        )
        outside = s > speed
    else:
        head = u_k + c
        c_star = c * (star.p / state.p) ** ((gamma - 1.0) / (2.0 * gamma))
        tail = u_star + c_star
        outside = s > head
        fan = (s >= tail) & ~outside
        c_fan = 2.0 / (gamma + 1.0) * (c - 0.5 * (gamma - 1.0) * (u_k - s[fan]))
        u[fan] = sign * 2.0 / (gamma + 1.0) * (-c + 0.5 * (gamma - 1.0) * u_k + s[fan])
        rho[fan] = state.rho * (c_fan / c) ** (2.0 / (gamma - 1.0))
        p[fan] = state.p * (c_fan / c) ** (2.0 * gamma / (gamma - 1.0))

    rho[outside] = state.rho
    u[outside] = state.u
    p[outside] = state.p
    return rho, u, p


def exact_riemann(problem: RiemannProblem, xi: float | np.ndarray) -> RiemannSample:
    """Primitive variables (rho, u, p) of the exact solution at xi = x / t."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    star = star_state(problem)
    rho = np.empty_like(xi_arr)
    u = np.empty_like(xi_arr)
    p = np.empty_like(xi_arr)

    left = xi_arr <= star.u
    for mask, state, sign in ((left, problem.left, -1.0), (~left, problem.right, 1.0)):
        r, v, q = _sample_side(xi_arr[mask], state, star, problem.gamma, sign)
        rho[mask], u[mask], p[mask] = r, v, q
    return RiemannSample(rho, u, p)


def wave_speeds(problem: RiemannProblem) -> tuple[float, float, float, float]:
    """Leftmost signal, left wave tail, contact and rightmost signal speeds.

    For a left shock head and tail coincide.
    """
    star = star_state(problem)
    g = problem.gamma
    c_l = sound_speed(problem.left, g)
    if star.p > problem.left.p:
        s = problem.left.u - c_l * math.sqrt(
            (g + 1.0) / (2.0 * g) * star.p / problem.left.p + (g - 1.0) / (2.0 * g)
        )
        head_l = tail_l = s
    else:
        head_l = problem.left.u - c_l
        tail_l = star.u - c_l * (star.p / problem.left.p) ** ((g - 1.0) / (2.0 * g))
    c_r = sound_speed(problem.right, g)
    if star.p > problem.right.p:
        head_r = problem.right.u + c_r * math.sqrt(
            (g + 1.0) / (2.0 * g) * star.p / problem.right.p + (g - 1.0) / (2.0 * g)
        )
    else:
        head_r = problem.right.u + c_r
    return head_l, tail_l, star.u, head_r
