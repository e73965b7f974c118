"""Sequential-explicit time integration of a two-component system.

    a' = f(b)        a^{n+1} = a^n + dt f(b^n)
    b' = g(a)        b^{n+1} = b^n + dt g(a^{n+1})

The second update consumes the value the first one just produced. Every
scheme in this package is built on this pattern.

Pure functions. No I/O.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SeqExpSystem:
    """Right-hand sides of the two equations.

    For the linear path only fp = f' and gp = g' are used.
    """

    f: Callable[[float], float] | None = None
    g: Callable[[float], float] | None = None
    fp: float = 0.0
    gp: float = 0.0

    @classmethod
    def linear(cls, fp: float, gp: float) -> "SeqExpSystem":
        return cls(f=lambda b: fp * b, g=lambda a: gp * a, fp=fp, gp=gp)

    @property
    def is_oscillatory(self) -> bool:
        return self.fp * self.gp < 0


def step_seqexp(a: float, b: float, sys: SeqExpSystem, dt: float) -> tuple[float, float]:
    if sys.f is None or sys.g is None:
        raise ValueError("step_seqexp needs both right-hand sides f and g")
    a_new = a + dt * sys.f(b)
    return a_new, b + dt * sys.g(a_new)


def linear_amplification(fp: float, gp: float, dt: float) -> np.ndarray:
    return np.array([[1.0, dt * fp], [dt * gp, 1.0 + dt * dt * fp * gp]])


def amplification_eigenvalues(fp: float, gp: float, dt: float) -> tuple[complex, complex]:
    """Roots of z^2 - z (2 + dt^2 f'g') + 1, by the quadratic formula."""
    b = 2.0 + dt * dt * fp * gp
    disc = complex(b * b - 4.0)
    root = disc**0.5
    return (b + root) / 2.0, (b - root) / 2.0


def stability_bound(fp: float, gp: float) -> float:
    """Largest dt with both eigenvalues on the unit circle (oscillatory case)."""
    if fp * gp >= 0:
        raise ValueError(f"Stability bound needs f'g' < 0, got f'={fp}, g'={gp}")
    return 2.0 / math.sqrt(-fp * gp)


def discrete_hamiltonian(a_n: float, a_np1: float, b_n: float, fp: float, gp: float) -> float:
    """Quantity conserved by the linear step: g' a^n a^{n+1} / 2 - f' (b^n)^2 / 2."""
    return gp * a_n * a_np1 / 2.0 - fp * b_n * b_n / 2.0
