"""Difference-operator pairs (D, D') of the sequential-explicit schemes.

D acts on the field updated first and looks forward; D' acts on the freshly
updated field and looks backward. Both come from one bracket expression per
axis, evaluated with input stagger 0 (D) or 1 (D'). The same expressions
give the Fourier symbols used by the stability analysis.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.engine.stencils import BracketExpr, BracketOp, bracket, evaluate, symbol
from src.models.schemes import MaxwellSchemeId


class OperatorFamily(Enum):
    YEE = "yee"
    EXTENDED = "extended"
    CENTRAL = "central"
    CENTRAL_EXTENDED = "central-extended"


SCHEME_FAMILY: dict[MaxwellSchemeId, OperatorFamily] = {
    MaxwellSchemeId.YEE_ORIGINAL: OperatorFamily.YEE,
    MaxwellSchemeId.YEE_COLLOCATED: OperatorFamily.YEE,
    MaxwellSchemeId.YEE_COLLOCATED_EXPLICIT: OperatorFamily.YEE,
    MaxwellSchemeId.YEE_COLLOCATED_EXTENDED: OperatorFamily.EXTENDED,
    MaxwellSchemeId.YEE_EXTENDED_STAGGERED: OperatorFamily.EXTENDED,
    MaxwellSchemeId.CENTRAL: OperatorFamily.CENTRAL,
    MaxwellSchemeId.CENTRAL_EXTENDED: OperatorFamily.CENTRAL_EXTENDED,
    MaxwellSchemeId.YEE_EXTENDED_3D: OperatorFamily.EXTENDED,
}


def _derivative(family: OperatorFamily, axis: int, spacing: Sequence[float]) -> BracketExpr:
    ndim = len(spacing)
    h = spacing[axis]
    others = [b for b in range(ndim) if b != axis]
    if family is OperatorFamily.YEE:
        return bracket((axis, BracketOp.JUMP_HALF), norm=h)
    if family is OperatorFamily.EXTENDED:
        # jump along the axis, average over the half cell in every other direction
        ops = [(axis, BracketOp.JUMP_HALF)] + [(b, BracketOp.SUM_HALF) for b in others]
        return bracket(*ops, norm=h * 2 ** len(others))
    if family is OperatorFamily.CENTRAL:
        return bracket((axis, BracketOp.JUMP_WIDE), norm=2 * h)
    if ndim != 2:
        raise ValueError(f"{family.value} operators are defined in 2D only")
    return bracket((axis, BracketOp.JUMP_WIDE), (others[0], BracketOp.DOUBLE_SUM), norm=8 * h)


@dataclass(frozen=True)
class OperatorSet:
    family: OperatorFamily
    exprs: tuple[BracketExpr, ...]

    @classmethod
    def build(cls, family: OperatorFamily, spacing: Sequence[float]) -> "OperatorSet":
        return cls(family, tuple(_derivative(family, a, spacing) for a in range(len(spacing))))

    @property
    def ndim(self) -> int:
        return len(self.exprs)

    def d(self, axis: int, data: np.ndarray, ghost: int) -> np.ndarray:
        """D_axis applied to a ghosted array; returns interior values."""
        return evaluate(self.exprs[axis], data, ghost, (0,) * self.ndim)

    def dp(self, axis: int, data: np.ndarray, ghost: int) -> np.ndarray:
        """D'_axis applied to a ghosted array; returns interior values."""
        return evaluate(self.exprs[axis], data, ghost, (1,) * self.ndim)

    def symbols(
        self, beta: Sequence[float] | Sequence[np.ndarray]
    ) -> tuple[list[complex | np.ndarray], list[complex | np.ndarray]]:
        """Symbols (D_a, D'_a) per axis at wavenumber beta."""
        fwd = [symbol(e, beta, (0,) * self.ndim) for e in self.exprs]
        bwd = [symbol(e, beta, (1,) * self.ndim) for e in self.exprs]
        return fwd, bwd


def operators_for(scheme: MaxwellSchemeId, spacing: Sequence[float]) -> OperatorSet:
    try:
        family = SCHEME_FAMILY[scheme]
    except KeyError:
        raise ValueError(f"{scheme.value} is not a sequential-explicit scheme") from None
    return OperatorSet.build(family, spacing)
