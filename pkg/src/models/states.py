from dataclasses import dataclass

import numpy as np

from src.models.grid import Field


@dataclass(frozen=True)
class MaxwellState2D:
    """Transverse-magnetic fields (Bz, Ex, Ey)."""

    bz: Field
    ex: Field
    ey: Field

    @property
    def fields(self) -> tuple[Field, Field, Field]:
        return (self.bz, self.ex, self.ey)

    def copy(self) -> "MaxwellState2D":
        return MaxwellState2D(self.bz.copy(), self.ex.copy(), self.ey.copy())


@dataclass(frozen=True)
class MaxwellState3D:
    """B on nodes, E in cells."""

    bx: Field
    by: Field
    bz: Field
    ex: Field
    ey: Field
    ez: Field

    @property
    def b(self) -> tuple[Field, Field, Field]:
        return (self.bx, self.by, self.bz)

    @property
    def e(self) -> tuple[Field, Field, Field]:
        return (self.ex, self.ey, self.ez)

    def copy(self) -> "MaxwellState3D":
        return MaxwellState3D(*(f.copy() for f in self.b + self.e))


@dataclass(frozen=True)
class AcousticState:
    u: Field
    v: Field
    p: Field
    c: float = 1.0
    eps: float = 1.0  # low Mach scaling; 1/eps^2 multiplies the pressure gradient

    def __post_init__(self) -> None:
        if self.c <= 0 or self.eps <= 0:
            raise ValueError(f"c and eps must be positive, got c={self.c}, eps={self.eps}")

    def copy(self) -> "AcousticState":
        return AcousticState(self.u.copy(), self.v.copy(), self.p.copy(), self.c, self.eps)


@dataclass(frozen=True)
class ConservedState:
    """Euler conserved variables (rho, rho u, rho v, e) in cells."""

    rho: Field
    mx: Field
    my: Field
    e: Field
    gamma: float = 1.4

    @property
    def fields(self) -> tuple[Field, Field, Field, Field]:
        return (self.rho, self.mx, self.my, self.e)

    def stacked(self) -> np.ndarray:
        """Leading axis over the four components (ghosts included)."""
        return np.stack([f.data for f in self.fields])

    def copy(self) -> "ConservedState":
        return ConservedState(*(f.copy() for f in self.fields), self.gamma)


@dataclass(frozen=True)
class PrimitiveState:
    rho: Field
    u: Field
    v: Field
    p: Field
    gamma: float = 1.4

    @property
    def c(self) -> np.ndarray:
        """Sound speed sqrt(gamma p / rho), ghosts included."""
        return np.sqrt(self.gamma * self.p.data / self.rho.data)

    @property
    def mach(self) -> np.ndarray:
        return np.hypot(self.u.data, self.v.data) / self.c


@dataclass(frozen=True)
class EdgeFluxes:
    """fx[k, i, j]: flux of component k through face (i-1/2, j), i = 0..nx.

    fy[k, i, j]: flux through face (i, j-1/2), j = 0..ny.
    """

    fx: np.ndarray
    fy: np.ndarray


@dataclass(frozen=True)
class RiemannState:
    rho: float
    u: float
    p: float

    def __post_init__(self) -> None:
        if self.rho <= 0 or self.p <= 0:
            raise ValueError(f"Riemann states need rho > 0 and p > 0, got {self}")


@dataclass(frozen=True)
class RiemannProblem:
    left: RiemannState
    right: RiemannState
    gamma: float = 1.4

    def mirrored(self) -> "RiemannProblem":
        return RiemannProblem(
            RiemannState(self.right.rho, -self.right.u, self.right.p),
            RiemannState(self.left.rho, -self.left.u, self.left.p),
            self.gamma,
        )
