"""Canonical test fixtures used across all engine tests.

Grids: 32x32 periodic unit square (the structure-preservation grid) and a
small 8x6 periodic grid with unequal spacings for stencil checks.
Randomness: numpy Generator seeded with 20240607.
"""

import numpy as np
import pytest

from src.models.grid import Grid


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def periodic_grid() -> Grid:
    """32 x 32 cells on the unit square, periodic both ways."""
    return Grid.uniform(32, 32)


@pytest.fixture
def small_grid() -> Grid:
    """8 x 6 cells on the unit square: dx = 1/8, dy = 1/6."""
    return Grid.uniform(8, 6, 1.0, 1.0)


@pytest.fixture
def grid_3d() -> Grid:
    n = 8
    return Grid(n, n, 1.0 / n, 1.0 / n, nz=n, dz=1.0 / n)


def random_interior(rng: np.random.Generator, grid: Grid) -> np.ndarray:
    return rng.standard_normal(grid.cells)
