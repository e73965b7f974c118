"""Ghost-layer filling and field sampling on Cartesian grids.

Ghosts are filled axis by axis over the full extent of the other axes, so
corner ghosts end up consistent with both neighbours.
"""

import logging
from collections.abc import Callable, Sequence

import numpy as np

from src.config import settings
from src.engine.errors import ConfigError, SolverError
from src.models.grid import BoundaryKind, Field, Grid, Layout

logger = logging.getLogger(__name__)


def _along(ndim: int, axis: int, index: slice | int) -> tuple[slice | int, ...]:
    key: list[slice | int] = [slice(None)] * ndim
    key[axis] = index
    return tuple(key)


def _fill_periodic(data: np.ndarray, axis: int, n: int, g: int) -> None:
    nd = data.ndim
    data[_along(nd, axis, slice(0, g))] = data[_along(nd, axis, slice(n, n + g))]
    data[_along(nd, axis, slice(n + g, n + 2 * g))] = data[_along(nd, axis, slice(g, 2 * g))]


def _fill_reflective(data: np.ndarray, axis: int, n: int, g: int, sign: float) -> None:
    nd = data.ndim
    for m in range(g):
        data[_along(nd, axis, g - 1 - m)] = sign * data[_along(nd, axis, g + m)]
        data[_along(nd, axis, n + g + m)] = sign * data[_along(nd, axis, n + g - 1 - m)]


def _fill_frozen(data: np.ndarray, snapshot: np.ndarray, axis: int, n: int, g: int) -> None:
    nd = data.ndim
    for ghosts in (slice(0, g), slice(n + g, n + 2 * g)):
        key = _along(nd, axis, ghosts)
        data[key] = snapshot[key]


def fill_ghosts(
    field: Field,
    grid: Grid,
    policies: Sequence[BoundaryKind] | None = None,
    frozen: Field | None = None,
) -> Field:
    """Populate the ghost layers of a field in place and return it.

    Args:
        field: Field whose interior is current.
        grid: Grid the field lives on.
        policies: Boundary kind per axis; defaults to the grid's.
        frozen: Snapshot providing ghost values for FROZEN axes.
    """
    g = grid.ghost
    if g < 1:
        raise ConfigError("fill_ghosts needs a ghost width of at least 1")
    kinds = tuple(policies) if policies is not None else grid.boundaries
    if len(kinds) != grid.ndim:
        raise ConfigError(f"Expected {grid.ndim} boundary policies, got {len(kinds)}")
    stagger = field.layout.stagger(grid.ndim)

    for axis, (kind, n) in enumerate(zip(kinds, grid.cells)):
        if kind is BoundaryKind.PERIODIC:
            if n < g:
                raise ConfigError(f"Periodic axis {axis} has {n} cells, fewer than ghost width {g}")
            _fill_periodic(field.data, axis, n, g)
        elif kind is BoundaryKind.REFLECTIVE:
            if stagger[axis]:
                raise ConfigError(
                    f"Reflective walls need samples centred in cells along axis {axis}, "
                    f"got layout {field.layout.name}"
                )
            sign = -1.0 if field.normal_axis == axis else 1.0
            _fill_reflective(field.data, axis, n, g, sign)
        elif kind is BoundaryKind.FROZEN:
            if frozen is None:
                raise ConfigError(f"Frozen boundary on axis {axis} requires a snapshot field")
            if frozen.data.shape != field.data.shape:
                raise ConfigError(
                    f"Frozen snapshot shape {frozen.data.shape} != field shape {field.data.shape}"
                )
            _fill_frozen(field.data, frozen.data, axis, n, g)

    if settings.debug_checks and not np.all(np.isfinite(field.data)):
        raise SolverError(f"Non-finite values after ghost fill ({field.layout.name} field)")
    return field


def init_from(
    fn: Callable[..., np.ndarray | float],
    grid: Grid,
    layout: Layout = Layout.CELL,
    normal_axis: int | None = None,
) -> Field:
    """Sample fn at the layout's positions, ghost positions included.

    Sampling the ghosts too makes the result usable as a frozen snapshot.
    """
    g = grid.ghost
    stagger = layout.stagger(grid.ndim)
    axes = [
        grid.origin[a] + (np.arange(-g, n + g) + 0.5 + 0.5 * stagger[a]) * grid.spacing[a]
        for a, n in enumerate(grid.cells)
    ]
    coords = np.meshgrid(*axes, indexing="ij")
    values = np.broadcast_to(np.asarray(fn(*coords), dtype=float), grid.shape)
    logger.debug("Sampled %s field on %s grid", layout.name, grid.cells)
    return Field(layout, np.array(values), normal_axis)


def fill_all(fields: Sequence[Field], grid: Grid, frozen: Sequence[Field] | None = None) -> None:
    """Fill ghosts of several fields, pairing each with its frozen snapshot."""
    for k, f in enumerate(fields):
        fill_ghosts(f, grid, frozen=frozen[k] if frozen is not None else None)
