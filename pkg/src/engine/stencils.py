"""Bracket calculus for finite-difference stencils on structured grids.

Single brackets along one axis:

    [q]_{i+1/2} = q_{i+1} - q_i          jump over half a cell
    {q}_{i+1/2} = q_{i+1} + q_i          sum over half a cell
    [q]_{i+-1}  = q_{i+1} - q_{i-1}      wide jump
    [[q]]_i     = q_{i+1} - 2 q_i + q_{i-1}
    {{q}}_i     = q_{i+1} + 2 q_i + q_{i-1}

Composite expressions are expanded from the outside in; along one axis that
is a convolution of the single-bracket weights, across axes an outer
product, so the order of expansion does not matter.

Storage convention: the result at index i of an axis sits at i + s/2, where
s is the output stagger (0 or 1). Whether a half bracket looks forward
(cells i, i+1) or backward (cells i-1, i) follows from the input stagger.

Two evaluation paths exist. The fused path correlates the data once with the
composite kernel (scipy.signal, direct method). The reference path applies
the single brackets one after the other and is kept as a correctness oracle.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.signal import correlate

from src.engine.errors import StencilReachError
from src.models.grid import Field, Grid, Layout


class BracketOp(Enum):
    JUMP_HALF = (-1.0, 1.0)
    SUM_HALF = (1.0, 1.0)
    JUMP_WIDE = (-1.0, 0.0, 1.0)
    DOUBLE_JUMP = (1.0, -2.0, 1.0)
    DOUBLE_SUM = (1.0, 2.0, 1.0)

    @property
    def weights(self) -> np.ndarray:
        return np.array(self.value)


@dataclass(frozen=True)
class BracketExpr:
    """Composite bracket expression divided by a constant normalization."""

    ops: tuple[tuple[int, BracketOp], ...]
    norm: float = 1.0

    def axis_kernel(self, axis: int) -> np.ndarray:
        kernel = np.array([1.0])
        for a, op in self.ops:
            if a == axis:
                kernel = np.convolve(kernel, op.weights)
        return kernel

    @property
    def axes(self) -> set[int]:
        return {a for a, _ in self.ops}


def bracket(*ops: tuple[int, BracketOp], norm: float = 1.0) -> BracketExpr:
    return BracketExpr(tuple(ops), norm)


@dataclass(frozen=True)
class _AxisWindow:
    kernel: np.ndarray
    start: int  # offset of the first kernel cell relative to the output index
    stagger_out: int

    @property
    def reach_low(self) -> int:
        return -self.start

    @property
    def reach_high(self) -> int:
        return self.start + len(self.kernel) - 1


def _window(expr: BracketExpr, axis: int, stagger_in: int) -> _AxisWindow:
    kernel = expr.axis_kernel(axis)
    length = len(kernel)
    stagger_out = (stagger_in + length - 1) % 2
    start = (stagger_out - stagger_in - (length - 1)) // 2
    return _AxisWindow(kernel, start, stagger_out)


def output_stagger(expr: BracketExpr, stagger_in: Sequence[int]) -> tuple[int, ...]:
    return tuple(_window(expr, a, s).stagger_out for a, s in enumerate(stagger_in))


def evaluate(
    expr: BracketExpr,
    data: np.ndarray,
    ghost: int,
    stagger: Sequence[int] | None = None,
    extend: Sequence[tuple[int, int]] | None = None,
    fused: bool = True,
    axis_order: Sequence[int] | None = None,
) -> np.ndarray:
    """Evaluate a bracket expression on a ghosted array.

    Args:
        expr: The composite expression.
        data: Array including `ghost` layers on every axis.
        ghost: Ghost width of `data`.
        stagger: Input stagger per axis (defaults to cell-centred).
        extend: Extra outputs (left, right) per axis beyond the interior range.
        fused: Single correlation with the composite kernel when True.
        axis_order: Expansion order of the reference path.

    Returns:
        Array of shape interior + extensions.
    """
    ndim = data.ndim
    stagger = tuple(stagger) if stagger is not None else (0,) * ndim
    extend = tuple(extend) if extend is not None else ((0, 0),) * ndim
    cells = tuple(s - 2 * ghost for s in data.shape)

    windows = [_window(expr, a, stagger[a]) for a in range(ndim)]
    block: list[slice] = []
    for a, w in enumerate(windows):
        left, right = extend[a]
        if w.reach_low + left > ghost or w.reach_high + right > ghost:
            raise StencilReachError(
                f"Stencil reaches {max(w.reach_low + left, w.reach_high + right)} cells on "
                f"axis {a}, ghost width is {ghost}"
            )
        lo = ghost - left + w.start
        hi = ghost + cells[a] - 1 + right + w.start + len(w.kernel) - 1
        block.append(slice(lo, hi + 1))
    sub = data[tuple(block)]

    if fused:
        kernel = windows[0].kernel
        for w in windows[1:]:
            kernel = np.multiply.outer(kernel, w.kernel)
        kernel = np.asarray(kernel).reshape([len(w.kernel) for w in windows])
        out = correlate(sub, kernel, mode="valid", method="direct")
    else:
        out = sub
        order = list(axis_order) if axis_order is not None else list(range(ndim))
        for axis in order:
            for a, op in expr.ops:
                if a == axis:
                    out = _correlate_axis(out, op.weights, axis)
    return out / expr.norm


def _correlate_axis(arr: np.ndarray, weights: np.ndarray, axis: int) -> np.ndarray:
    n = arr.shape[axis] - len(weights) + 1
    total = np.zeros_like(arr, shape=arr.shape[:axis] + (n,) + arr.shape[axis + 1:])
    for k, w in enumerate(weights):
        if w != 0.0:
            key = [slice(None)] * arr.ndim
            key[axis] = slice(k, k + n)
            total = total + w * arr[tuple(key)]
    return total


def apply_bracket(expr: BracketExpr, field: Field, grid: Grid, fused: bool = True) -> Field:
    """Evaluate an expression on a field; the result layout is derived, not declared."""
    stagger_in = field.layout.stagger(grid.ndim)
    values = evaluate(expr, field.data, grid.ghost, stagger_in, fused=fused)
    layout = Layout.from_stagger(output_stagger(expr, stagger_in))
    return Field.from_interior(grid, values, layout)


def avg_perp(field: Field, grid: Grid, axis: int) -> Field:
    """The averaging operator <q> = (q_{+1} + 2 q + q_{-1}) / 4 along `axis`."""
    return apply_bracket(bracket((axis, BracketOp.DOUBLE_SUM), norm=4.0), field, grid)


def symbol(
    expr: BracketExpr,
    beta: Sequence[float] | Sequence[np.ndarray],
    stagger: Sequence[int] | None = None,
) -> complex | np.ndarray:
    """Fourier symbol of an expression, with translation factors t = exp(i beta).

    beta entries may be arrays (broadcast against each other).
    """
    ndim = len(beta)
    stagger = tuple(stagger) if stagger is not None else (0,) * ndim
    result: complex | np.ndarray = 1.0 + 0.0j
    for a in range(ndim):
        w = _window(expr, a, stagger[a])
        b = np.asarray(beta[a])
        factor = sum(c * np.exp(1j * b * (w.start + k)) for k, c in enumerate(w.kernel))
        result = result * factor
    return result / expr.norm
