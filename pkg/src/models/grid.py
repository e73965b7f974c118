from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class BoundaryKind(Enum):
    PERIODIC = "periodic"
    FROZEN = "frozen"  # ghosts pinned to a snapshot (the "fixed" walls of KH)
    REFLECTIVE = "reflective"  # mirror, normal component negated


class Layout(Enum):
    """Where a field's samples sit relative to the cell centres.

    The value is the per-axis stagger in half cells: 1 means the sample of
    index i sits at i + 1/2. Edges are named after the axis they run along.
    """

    CELL = (0, 0, 0)
    NODE = (1, 1, 1)
    EDGE_X = (0, 1, 1)  # (i, j+1/2) in 2D
    EDGE_Y = (1, 0, 1)  # (i+1/2, j) in 2D
    EDGE_Z = (1, 1, 0)

    def stagger(self, ndim: int) -> tuple[int, ...]:
        return self.value[:ndim]

    @classmethod
    def from_stagger(cls, stagger: tuple[int, ...]) -> "Layout":
        ndim = len(stagger)
        for layout in cls:
            if layout.stagger(ndim) == tuple(stagger):
                # In 2D EDGE_Z and NODE coincide; NODE is listed first.
                return layout
        raise ValueError(f"No layout with stagger {stagger} in {ndim}D")


@dataclass(frozen=True)
class Grid:
    """Uniform Cartesian grid. nz == 1 means a 2D grid."""

    nx: int
    ny: int
    dx: float
    dy: float
    nz: int = 1
    dz: float = 1.0
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)
    ghost: int = 1
    bc_x: BoundaryKind = BoundaryKind.PERIODIC
    bc_y: BoundaryKind = BoundaryKind.PERIODIC
    bc_z: BoundaryKind = BoundaryKind.PERIODIC

    def __post_init__(self) -> None:
        if min(self.nx, self.ny, self.nz) < 1:
            raise ValueError(f"Cell counts must be positive, got {self.cells}")
        if min(self.dx, self.dy, self.dz) <= 0:
            raise ValueError(f"Spacings must be positive, got {self.spacing}")
        if self.ghost < 0:
            raise ValueError(f"Ghost width must be non-negative, got {self.ghost}")

    @classmethod
    def uniform(
        cls,
        nx: int,
        ny: int,
        lx: float = 1.0,
        ly: float = 1.0,
        **kwargs: object,
    ) -> "Grid":
        """Grid of nx x ny cells covering [x0, x0+lx] x [y0, y0+ly]."""
        return cls(nx=nx, ny=ny, dx=lx / nx, dy=ly / ny, **kwargs)  # type: ignore[arg-type]

    @property
    def ndim(self) -> int:
        return 2 if self.nz == 1 else 3

    @property
    def cells(self) -> tuple[int, ...]:
        return (self.nx, self.ny, self.nz)[: self.ndim]

    @property
    def spacing(self) -> tuple[float, ...]:
        return (self.dx, self.dy, self.dz)[: self.ndim]

    @property
    def boundaries(self) -> tuple[BoundaryKind, ...]:
        return (self.bc_x, self.bc_y, self.bc_z)[: self.ndim]

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape including ghost layers."""
        return tuple(n + 2 * self.ghost for n in self.cells)

    @property
    def interior(self) -> tuple[slice, ...]:
        g = self.ghost
        return tuple(slice(g, g + n) for n in self.cells)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cells))

    def coordinates(self, layout: "Layout") -> list[np.ndarray]:
        """1D sample coordinates per axis (interior only) for a layout."""
        stagger = layout.stagger(self.ndim)
        return [
            self.origin[a] + (np.arange(n) + 0.5 + 0.5 * stagger[a]) * self.spacing[a]
            for a, n in enumerate(self.cells)
        ]


@dataclass
class Field:
    """A scalar field stored with inline ghost layers.

    normal_axis marks a vector component along that axis; reflective walls
    on that axis flip its sign.
    """

    layout: Layout
    data: np.ndarray
    normal_axis: int | None = None

    def interior(self, grid: Grid) -> np.ndarray:
        return self.data[grid.interior]

    def copy(self) -> "Field":
        return Field(self.layout, self.data.copy(), self.normal_axis)

    @classmethod
    def zeros(cls, grid: Grid, layout: Layout = Layout.CELL, **kwargs: object) -> "Field":
        return cls(layout, np.zeros(grid.shape), **kwargs)  # type: ignore[arg-type]

    @classmethod
    def from_interior(
        cls, grid: Grid, values: np.ndarray, layout: Layout = Layout.CELL,
        normal_axis: int | None = None,
    ) -> "Field":
        """Embed interior values in a ghosted array; ghosts start at zero."""
        data = np.zeros(grid.shape, dtype=np.result_type(values, float))
        data[grid.interior] = values
        return cls(layout, data, normal_axis)


@dataclass(frozen=True)
class GridSpec:
    """Serializable grid description used by run configs."""

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)
    bc: tuple[BoundaryKind, BoundaryKind] = field(
        default=(BoundaryKind.PERIODIC, BoundaryKind.PERIODIC)
    )

    def build(self, ghost: int = 1) -> Grid:
        return Grid.uniform(
            self.nx, self.ny, self.lx, self.ly,
            origin=(self.origin[0], self.origin[1], 0.0),
            ghost=ghost, bc_x=self.bc[0], bc_y=self.bc[1],
        )
