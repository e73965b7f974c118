"""Error norms, convergence rates, energies and low Mach scaling series.

Pure functions. No I/O.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.engine.euler import (
    cons_to_prim,
    evolve,
    node_divergence,
    rescaled_pressure_gradient_norm,
)
from src.models.grid import Field, Grid
from src.models.schemes import FluxVariant
from src.models.states import ConservedState, MaxwellState2D, PrimitiveState

logger = logging.getLogger(__name__)


def _values(q: Field | np.ndarray, grid: Grid | None) -> np.ndarray:
    if isinstance(q, Field):
        return q.interior(grid) if grid is not None else q.data
    return np.asarray(q, dtype=float)


def l1_error(
    numeric: Field | np.ndarray, reference: Field | np.ndarray, grid: Grid | None = None
) -> float:
    """(1/N) sum |q_i - qref_i|; Fields are compared on their interior when a grid is given."""
    a, b = _values(numeric, grid), _values(reference, grid)
    if a.shape != b.shape:
        raise ValueError(f"Shape mismatch: {a.shape} vs {b.shape}")
    return float(np.mean(np.abs(a - b)))


def relative_l1(a: np.ndarray, b: np.ndarray) -> float:
    scale = float(np.sum(np.abs(b)))
    if scale == 0.0:
        raise ValueError("Reference field is identically zero")
    return float(np.sum(np.abs(a - b))) / scale


def convergence_rate(errors: Sequence[float], spacings: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(spacing)."""
    e, h = np.asarray(errors, dtype=float), np.asarray(spacings, dtype=float)
    if e.shape != h.shape:
        raise ValueError(f"{e.size} errors for {h.size} spacings")
    if e.size < 3:
        raise ValueError(f"Need at least 3 refinement levels, got {e.size}")
    if np.any(e <= 0) or np.any(h <= 0):
        raise ValueError("Errors and spacings must be positive")
    slope, _ = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope)


# --- Maxwell energies --------------------------------------------------------------------


def maxwell_energy(state_n: MaxwellState2D, state_np1: MaxwellState2D, grid: Grid) -> float:
    """(Bz^n Bz^{n+1} + |E^n|^2) / 2 summed over the grid; exactly conserved by
    the sequential schemes."""
    b0, b1 = state_n.bz.interior(grid), state_np1.bz.interior(grid)
    ex, ey = state_n.ex.interior(grid), state_n.ey.interior(grid)
    return 0.5 * grid.cell_volume * float(np.sum(b0 * b1) + np.sum(ex * ex + ey * ey))


def l2_norm(state: MaxwellState2D, grid: Grid) -> float:
    return float(
        np.sqrt(grid.cell_volume * sum(np.sum(f.interior(grid) ** 2) for f in state.fields))
    )


# --- low Mach scaling ------------------------------------------------------------------------


@dataclass(frozen=True)
class LowMachSample:
    t: float
    divergence: float
    pressure_gradient: float


def _divergence_l1(prim: PrimitiveState, grid: Grid) -> float:
    return float(np.mean(np.abs(node_divergence(prim, grid, undivided=True).interior(grid))))


def divergence_norm(state: ConservedState, grid: Grid) -> float:
    """(1/N) sum |{[u]_x}_y + {[v]_y}_x|, undivided like the pressure-jump norm."""
    return _divergence_l1(cons_to_prim(state), grid)


def lowmach_sample(t: float, state: ConservedState, grid: Grid, mach: float) -> LowMachSample:
    prim = cons_to_prim(state)
    return LowMachSample(
        t,
        _divergence_l1(prim, grid),
        rescaled_pressure_gradient_norm(prim, grid, mach),
    )


def lowmach_timeseries(
    state: ConservedState,
    grid: Grid,
    mach: float,
    t_end: float,
    cfl: float,
    samples: int = 20,
    variant: FluxVariant = FluxVariant.EXTENDED,
) -> tuple[list[LowMachSample], ConservedState]:
    """Divergence and rescaled pressure-gradient norms at `samples` + 1 equally
    spaced times, sampled at the first step reaching each mark.

    Returns the series and the final state.
    """
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    marks = np.linspace(0.0, t_end, samples + 1)
    series: list[LowMachSample] = []
    final = state
    k = 0
    for t, current in evolve(state, grid, t_end, cfl, variant):
        final = current
        if k < marks.size and t >= marks[k] * (1.0 - 1e-12):
            series.append(lowmach_sample(t, current, grid, mach))
            while k < marks.size and t >= marks[k] * (1.0 - 1e-12):
                k += 1
    logger.info("Low Mach series M=%g: %d samples to t=%g", mach, len(series), t_end)
    return series, final


def time_average(series: Sequence[LowMachSample]) -> tuple[float, float]:
    """Mean divergence and pressure-gradient norms, skipping the initial sample."""
    body = series[1:] if len(series) > 1 else series
    return (
        float(np.mean([s.divergence for s in body])),
        float(np.mean([s.pressure_gradient for s in body])),
    )


def mach_normalized_speed(state: ConservedState, grid: Grid, mach: float) -> np.ndarray:
    """Local Mach number divided by the reference Mach number, interior cells."""
    prim = cons_to_prim(state)
    return prim.mach[grid.interior] / mach
