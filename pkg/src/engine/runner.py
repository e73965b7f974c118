"""Orchestration of runs, stability sweeps and studies.

Each entry point takes a RunConfig and returns an Artifacts bundle of
tables, field snapshots and plot descriptions. Nothing here touches the
filesystem; the CLI writers do.
"""

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from src.config import settings
from src.engine import acoustics, cases, diagnostics, euler, maxwell
from src.engine.errors import ConfigError
from src.engine.euler_stability import euler_max_dt_map
from src.engine.riemann import exact_riemann
from src.engine.spectral import stability_table
from src.models.grid import BoundaryKind, Field, Grid
from src.models.run_config import EULER, Family, RunConfig, Subcommand
from src.models.schemes import AcousticSchemeId, CaseId, MaxwellSchemeId
from src.models.states import ConservedState, MaxwellState2D

logger = logging.getLogger(__name__)

DEFAULT_WAVE_CELLS = 64
DEFAULT_WAVE_T_END = 1.0
LOWMACH_DEFAULT = (1e-1, 1e-2, 1e-3)
SHOCK_TUBE_LEVELS = (250, 500, 1000)
VORTEX_LEVELS = (25, 50, 100, 200)
EULER_MAP_SPEEDS = tuple(float(s) for s in np.linspace(-1.0, 1.0, 9))


@dataclass(frozen=True)
class Snapshot:
    name: str
    grid: Grid
    fields: dict[str, Field]


@dataclass(frozen=True)
class PlotSpec:
    """A gnuplot figure drawn from one table."""

    table: str
    x: str
    ys: tuple[str, ...]
    title: str
    logscale: str = ""


@dataclass
class Artifacts:
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    snapshots: list[Snapshot] = field(default_factory=list)
    plots: list[PlotSpec] = field(default_factory=list)


def _workers(threads: int) -> int:
    return max(1, min(threads, settings.max_threads))


def _snapshot_marks(t_end: float, snapshots: int) -> np.ndarray:
    return np.linspace(0.0, t_end, snapshots + 2)[1:-1]


def _steps(t_end: float, dt: float) -> tuple[int, float]:
    """Number of equal steps reaching t_end with a step no larger than dt."""
    if t_end == 0:
        return 0, dt
    n = math.ceil(t_end / dt - 1e-12)
    return n, t_end / n


# --- waves: Maxwell and acoustics --------------------------------------------------------


def _pulse(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.exp(-100.0 * ((x - 0.5) ** 2 + (y - 0.5) ** 2))


def _zero(x: np.ndarray, *_: np.ndarray) -> np.ndarray:
    return np.zeros_like(x)


def _wave_grid(config: RunConfig) -> Grid:
    n = config.nx or DEFAULT_WAVE_CELLS
    return Grid.uniform(n, config.ny or n)


def run_maxwell(config: RunConfig) -> Artifacts:
    scheme = config.maxwell_scheme
    if scheme is MaxwellSchemeId.YEE_EXTENDED_3D:
        return run_maxwell_3d(config)
    grid = _wave_grid(config)
    t_end = DEFAULT_WAVE_T_END if config.t_end is None else config.t_end
    n_steps, dt = _steps(t_end, maxwell.default_dt(scheme, grid, config.effective_cfl()))
    state = maxwell.init_state(scheme, grid, _pulse, _zero, _zero)
    has_involution = scheme is not MaxwellSchemeId.UPWIND_SPLIT
    inv0 = maxwell.discrete_involution(scheme, state, grid) if has_involution else None

    out = Artifacts()
    rows: list[dict[str, float]] = []
    marks = list(_snapshot_marks(t_end, config.snapshots))
    for n in range(n_steps):
        new = maxwell.step(scheme, state, grid, dt)
        row = {"t": n * dt, "l2": diagnostics.l2_norm(state, grid)}
        if scheme.is_sequential:
            row["energy"] = diagnostics.maxwell_energy(state, new, grid)
        if inv0 is not None:
            drift = maxwell.discrete_involution(scheme, state, grid).data - inv0.data
            row["involution_drift"] = float(np.max(np.abs(drift)))
        rows.append(row)
        state = new
        if marks and (n + 1) * dt >= marks[0]:
            marks.pop(0)
            out.snapshots.append(_maxwell_snapshot(f"fields_{n + 1:06d}", state, grid))
    out.snapshots.append(_maxwell_snapshot("fields_final", state, grid))
    if rows:
        out.tables["energy"] = pd.DataFrame(rows)
        out.plots.append(PlotSpec("energy", "t", ("l2",), f"{scheme.value}: L2 norm"))
    logger.info("Maxwell %s: %d steps of dt=%.4g", scheme.value, n_steps, dt)
    return out


def _maxwell_snapshot(name: str, state: MaxwellState2D, grid: Grid) -> Snapshot:
    return Snapshot(name, grid, {"Bz": state.bz, "Ex": state.ex, "Ey": state.ey})


def run_maxwell_3d(config: RunConfig) -> Artifacts:
    n = config.nx or 16
    grid = Grid(n, n, 1.0 / n, 1.0 / n, nz=n, dz=1.0 / n)
    t_end = 0.25 if config.t_end is None else config.t_end
    n_steps, dt = _steps(t_end, config.effective_cfl() * grid.dx)

    def pulse(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.exp(-50.0 * ((x - 0.5) ** 2 + (y - 0.5) ** 2 + (z - 0.5) ** 2))

    state = maxwell.init_state_3d(grid, (_zero, _zero, _zero), (_zero, _zero, pulse))
    div_e0, div_b0 = maxwell.discrete_involution_3d(state, grid)
    rows = []
    for k in range(n_steps + 1):
        div_e, div_b = maxwell.discrete_involution_3d(state, grid)
        energy = sum(float(np.sum(f.interior(grid) ** 2)) for f in state.b + state.e)
        rows.append({
            "t": k * dt,
            "l2": math.sqrt(grid.cell_volume * energy),
            "div_e_drift": float(np.max(np.abs(div_e.data - div_e0.data))),
            "div_b_drift": float(np.max(np.abs(div_b.data - div_b0.data))),
        })
        if k < n_steps:
            state = maxwell.step_3d(state, grid, dt)
    return Artifacts(tables={"energy": pd.DataFrame(rows)})


def run_acoustics(config: RunConfig) -> Artifacts:
    scheme = config.acoustic_scheme
    grid = _wave_grid(config)
    eps = config.mach[0] if config.mach else 1.0
    t_end = DEFAULT_WAVE_T_END if config.t_end is None else config.t_end
    dt0 = acoustics.default_dt(scheme, grid, eps=eps, cfl=config.effective_cfl())
    n_steps, dt = _steps(t_end, dt0)
    state = acoustics.init_acoustic(scheme, grid, _zero, _zero, _pulse, eps=eps)
    vort0 = acoustics.vorticity(scheme, state, grid)

    rows = []
    for n in range(n_steps):
        new = acoustics.step_acoustic(scheme, state, grid, dt)
        vort = acoustics.vorticity(scheme, state, grid)
        rows.append({
            "t": n * dt,
            "energy": acoustics.acoustic_energy(state, new, grid),
            "vorticity_drift": float(np.max(np.abs(vort.data - vort0.data))),
        })
        state = new
    fields = {"u": state.u, "v": state.v, "p": state.p}
    out = Artifacts(snapshots=[Snapshot("fields_final", grid, fields)])
    if rows:
        out.tables["energy"] = pd.DataFrame(rows)
    return out


# --- Euler ---------------------------------------------------------------------------------------


def _case_grid(config: RunConfig, case: CaseId) -> Grid:
    spec = cases.CASES[case]
    if case is CaseId.KELVIN_HELMHOLTZ and config.full_scale:
        return spec.grid(*cases.KH_FULL_SCALE)
    return spec.grid(config.nx, config.ny)


def _case_mach(config: RunConfig, case: CaseId) -> float | None:
    return config.mach[0] if config.mach and case in cases.VORTICES else None


def _euler_snapshot(name: str, state: ConservedState, grid: Grid) -> Snapshot:
    prim = euler.cons_to_prim(state)
    mach = Field(prim.rho.layout, prim.mach)
    return Snapshot(
        name, grid, {"rho": prim.rho, "u": prim.u, "v": prim.v, "p": prim.p, "mach": mach}
    )


def shock_tube_profile(case: CaseId, state: ConservedState, grid: Grid, t: float) -> pd.DataFrame:
    """Row j = 0 of a shock tube next to the exact solution at the cell centres."""
    prim = euler.cons_to_prim(state)
    x = grid.coordinates(prim.rho.layout)[0]
    j = grid.ghost
    inner = grid.interior[0]
    table = pd.DataFrame({
        "x": x,
        "rho": prim.rho.data[inner, j],
        "u": prim.u.data[inner, j],
        "p": prim.p.data[inner, j],
    })
    if t > 0:
        exact = exact_riemann(cases.riemann_problem(case, state.gamma), (x - cases.INTERFACE) / t)
        table["rho_exact"], table["u_exact"], table["p_exact"] = exact.rho, exact.u, exact.p
    return table


def run_euler(config: RunConfig) -> Artifacts:
    case = config.case
    if case is None:
        raise ConfigError("Euler runs need a case")
    spec = cases.CASES[case]
    grid = _case_grid(config, case)
    t_end = spec.t_end if config.t_end is None else config.t_end
    cfl = config.effective_cfl(spec.cfl)
    state = cases.build_case(case, grid, _case_mach(config, case), config.gamma)
    frozen = state.copy() if BoundaryKind.FROZEN in grid.boundaries else None

    out = Artifacts()
    marks = list(_snapshot_marks(t_end, config.snapshots))
    t, k = 0.0, 0
    for t, state in euler.evolve(state, grid, t_end, cfl, config.variant, frozen):
        if marks and t >= marks[0]:
            marks.pop(0)
            k += 1
            out.snapshots.append(_euler_snapshot(f"state_{k:03d}", state, grid))
    if case in cases.SHOCK_TUBES:
        out.tables["profile"] = shock_tube_profile(case, state, grid, t)
        ys = ("rho", "rho_exact") if t > 0 else ("rho",)
        out.plots.append(PlotSpec("profile", "x", ys, f"{case.value} at t={t:g}"))
    out.snapshots.append(_euler_snapshot("state_final", state, grid))
    return out


def shock_tube_study(
    case: CaseId,
    levels: Sequence[int] = SHOCK_TUBE_LEVELS,
    threads: int = 1,
    cfl: float | None = None,
) -> pd.DataFrame:
    """L1 density error against the exact solution over a sequence of grids."""
    spec = cases.CASES[case]
    problem = cases.riemann_problem(case)

    def error(n: int) -> dict[str, float]:
        grid = spec.grid(n, spec.ny)
        state = cases.build_case(case, grid)
        final = state
        run = euler.evolve(state, grid, spec.t_end, cfl or spec.cfl, frozen=state.copy())
        for _, final in run:
            pass
        x = grid.coordinates(final.rho.layout)[0]
        exact = exact_riemann(problem, (x - cases.INTERFACE) / spec.t_end)
        rho = final.rho.data[grid.interior[0], grid.ghost]
        return {"n": n, "dx": grid.dx, "l1_rho": diagnostics.l1_error(rho, exact.rho)}

    with ThreadPoolExecutor(max_workers=_workers(threads)) as pool:
        return pd.DataFrame(list(pool.map(error, levels)))


VARIABLES = ("rho", "mx", "my", "e")


def vortex_convergence(
    levels: Sequence[int],
    mach: float = 0.3,
    t_end: float = 0.05,
    cfl: float = 0.9,
    threads: int = 1,
) -> pd.DataFrame:
    """L1 errors of each conserved variable against the stationary initial data."""

    def errors(n: int) -> dict[str, float]:
        grid = cases.CASES[CaseId.SMOOTH_VORTEX].grid(n, n)
        initial = cases.build_case(CaseId.SMOOTH_VORTEX, grid, mach)
        final = initial
        for _, final in euler.evolve(initial, grid, t_end, cfl):
            pass
        row: dict[str, float] = {"n": n, "dx": grid.dx}
        for name, a, b in zip(VARIABLES, final.fields, initial.fields):
            row[f"l1_{name}"] = diagnostics.l1_error(a, b, grid)
        return row

    with ThreadPoolExecutor(max_workers=_workers(threads)) as pool:
        return pd.DataFrame(list(pool.map(errors, levels)))


def rates(table: pd.DataFrame) -> pd.DataFrame:
    columns = [c for c in table.columns if c.startswith("l1_")]
    return pd.DataFrame([
        {"variable": c[3:], "rate": diagnostics.convergence_rate(table[c], table["dx"])}
        for c in columns
    ])


def run_convergence(config: RunConfig) -> Artifacts:
    case = config.case or CaseId.SMOOTH_VORTEX
    if case in cases.SHOCK_TUBES:
        levels = config.levels or list(SHOCK_TUBE_LEVELS)
        table = shock_tube_study(case, levels, config.threads, config.cfl)
    elif case is CaseId.SMOOTH_VORTEX:
        mach = config.mach[0] if config.mach else 0.3
        t_end = 0.05 if config.t_end is None else config.t_end
        levels = config.levels or list(VORTEX_LEVELS)
        table = vortex_convergence(levels, mach, t_end, config.cfl or 0.9, config.threads)
    else:
        raise ConfigError(f"No convergence study for {case.value}")
    ys = tuple(c for c in table.columns if c.startswith("l1_"))
    return Artifacts(
        tables={"errors": table, "rates": rates(table)},
        plots=[PlotSpec("errors", "dx", ys, f"{case.value}: L1 errors", logscale="xy")],
    )


# --- low Mach --------------------------------------------------------------------------------


@dataclass(frozen=True)
class LowMachRun:
    mach: float
    series: list[diagnostics.LowMachSample]
    final: ConservedState
    grid: Grid


def lowmach_study(
    machs: Sequence[float],
    n: int = 50,
    t_end: float = 1.0,
    cfl: float = 0.9,
    samples: int = 20,
    threads: int = 1,
) -> list[LowMachRun]:
    def one(mach: float) -> LowMachRun:
        grid = cases.CASES[CaseId.GRESHO_VORTEX].grid(n, n)
        state = cases.build_case(CaseId.GRESHO_VORTEX, grid, mach)
        series, final = diagnostics.lowmach_timeseries(state, grid, mach, t_end, cfl, samples)
        return LowMachRun(mach, series, final, grid)

    with ThreadPoolExecutor(max_workers=_workers(threads)) as pool:
        return list(pool.map(one, machs))


def mach_independence(a: LowMachRun, b: LowMachRun) -> float:
    """Relative L1 difference of the Mach-normalized speeds of two runs."""
    return diagnostics.relative_l1(
        diagnostics.mach_normalized_speed(a.final, a.grid, a.mach),
        diagnostics.mach_normalized_speed(b.final, b.grid, b.mach),
    )


def run_lowmach(config: RunConfig) -> Artifacts:
    machs = config.mach or list(LOWMACH_DEFAULT)
    spec = cases.CASES[CaseId.GRESHO_VORTEX]
    runs = lowmach_study(
        machs,
        config.nx or spec.nx,
        spec.t_end if config.t_end is None else config.t_end,
        config.effective_cfl(spec.cfl),
        threads=config.threads,
    )
    series = pd.DataFrame([
        {"mach": r.mach, "t": s.t, "divergence": s.divergence,
         "pressure_gradient": s.pressure_gradient}
        for r in runs for s in r.series
    ])
    summary = []
    for r in runs:
        div, grad = diagnostics.time_average(r.series)
        summary.append({"mach": r.mach, "mean_divergence": div, "mean_pressure_gradient": grad})
    out = Artifacts(tables={"series": series, "summary": pd.DataFrame(summary)})
    if len(runs) > 1:
        out.tables["mach_independence"] = pd.DataFrame([{
            "mach_a": runs[0].mach, "mach_b": runs[-1].mach,
            "relative_l1": mach_independence(runs[0], runs[-1]),
        }])
    out.plots.append(PlotSpec("summary", "mach", ("mean_divergence", "mean_pressure_gradient"),
                              "Low Mach scaling", logscale="xy"))
    for r in runs:
        out.snapshots.append(_euler_snapshot(f"gresho_M{r.mach:g}", r.final, r.grid))
    return out


# --- stability and listing -----------------------------------------------------------------------


def run_stability(config: RunConfig) -> Artifacts:
    family = config.family or Family.MAXWELL
    if family is Family.EULER:
        rows = euler_max_dt_map(EULER_MAP_SPEEDS, EULER_MAP_SPEEDS, 1.0, config.gamma,
                                samples=min(config.beta_samples, 64), threads=config.threads)
        table = pd.DataFrame([
            {"ubar": r.ubar, "vbar": r.vbar, "max_dt": r.max_dt, "closed_form": r.closed_form,
             "relative_gap": r.relative_gap}
            for r in rows
        ])
        return Artifacts(tables={"euler_stability": table})
    schemes: list[MaxwellSchemeId | AcousticSchemeId]
    if config.scheme is not None and config.scheme != EULER:
        schemes = [config.acoustic_scheme if family is Family.ACOUSTICS else config.maxwell_scheme]
    elif family is Family.ACOUSTICS:
        schemes = list(AcousticSchemeId)
    else:
        schemes = list(MaxwellSchemeId)
    cfl_rows = stability_table(schemes, config.beta_samples, threads=config.threads)
    table = pd.DataFrame([
        {"scheme": r.scheme, "cfl_max": r.cfl_numeric, "cfl_reference": r.cfl_reference}
        for r in cfl_rows
    ])
    return Artifacts(tables={"cfl_max": table})


def run_cases(config: RunConfig) -> Artifacts:
    table = pd.DataFrame([
        {"case": name, "description": s.description, "nx": s.nx, "ny": s.ny, "lx": s.lx,
         "ly": s.ly, "t_end": s.t_end, "cfl": s.cfl, "mach": s.mach}
        for name, s in cases.list_cases()
    ])
    return Artifacts(tables={"cases": table})


def run_simulation(config: RunConfig) -> Artifacts:
    if config.scheme is None:
        raise ConfigError("run needs --scheme or --case")
    if config.family is Family.EULER:
        return run_euler(config)
    if config.family is Family.ACOUSTICS:
        return run_acoustics(config)
    return run_maxwell(config)


DISPATCH: dict[Subcommand, Callable[[RunConfig], Artifacts]] = {
    Subcommand.RUN: run_simulation,
    Subcommand.STABILITY: run_stability,
    Subcommand.CONVERGENCE: run_convergence,
    Subcommand.LOWMACH: run_lowmach,
    Subcommand.CASES: run_cases,
}


def execute(config: RunConfig) -> Artifacts:
    logger.info("Starting %s", config.subcommand.value)
    artifacts = DISPATCH[config.subcommand](config)
    logger.info(
        "Finished %s: %d tables, %d snapshots",
        config.subcommand.value, len(artifacts.tables), len(artifacts.snapshots),
    )
    return artifacts
