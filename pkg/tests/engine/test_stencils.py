import numpy as np
import pytest

from src.engine.boundaries import fill_ghosts
from src.engine.errors import StencilReachError
from src.engine.operators import OperatorFamily, OperatorSet, operators_for
from src.engine.stencils import (
    BracketOp,
    apply_bracket,
    avg_perp,
    bracket,
    evaluate,
    output_stagger,
    symbol,
)
from src.models.grid import Field, Grid, Layout
from src.models.schemes import MaxwellSchemeId

from tests.conftest import random_interior

X, Y = 0, 1


def _periodic(rng, grid):
    return fill_ghosts(Field.from_interior(grid, random_interior(rng, grid)), grid)


class TestBrackets:
    def test_forward_jump(self):
        data = np.arange(6.0)[:, None] * np.ones((1, 3))
        out = evaluate(bracket((X, BracketOp.JUMP_HALF)), data, ghost=1)
        np.testing.assert_array_equal(out, np.ones((4, 1)))

    def test_backward_jump_on_staggered_input(self):
        data = np.array([0.0, 1.0, 4.0, 9.0, 16.0])[:, None] * np.ones((1, 3))
        out = evaluate(bracket((X, BracketOp.JUMP_HALF)), data, ghost=1, stagger=(1, 0))
        np.testing.assert_array_equal(out[:, 0], [1.0, 3.0, 5.0])

    def test_wide_jump(self):
        data = np.array([0.0, 1.0, 4.0, 9.0, 16.0])[:, None] * np.ones((1, 3))
        out = evaluate(bracket((X, BracketOp.JUMP_WIDE)), data, ghost=1)
        np.testing.assert_array_equal(out[:, 0], [4.0, 8.0, 12.0])

    def test_double_jump_of_quadratic(self):
        data = (np.arange(7.0) ** 2)[:, None] * np.ones((1, 3))
        out = evaluate(bracket((X, BracketOp.DOUBLE_JUMP)), data, ghost=1)
        np.testing.assert_array_equal(out, np.full((5, 1), 2.0))

    def test_norm_divides(self):
        data = np.arange(6.0)[:, None] * np.ones((1, 3))
        out = evaluate(bracket((X, BracketOp.SUM_HALF), norm=2.0), data, ghost=1)
        np.testing.assert_array_equal(out[:, 0], [1.5, 2.5, 3.5, 4.5])

    def test_output_stagger(self):
        expr = bracket((X, BracketOp.JUMP_HALF), (Y, BracketOp.SUM_HALF))
        assert output_stagger(expr, (0, 0)) == (1, 1)
        assert output_stagger(expr, (1, 1)) == (0, 0)
        assert output_stagger(bracket((X, BracketOp.JUMP_WIDE)), (0, 1)) == (0, 1)

    def test_same_axis_composes(self):
        """[{q}]_{i} on one axis is the wide jump."""
        expr = bracket((X, BracketOp.JUMP_HALF), (X, BracketOp.SUM_HALF))
        np.testing.assert_array_equal(expr.axis_kernel(X), [-1.0, 0.0, 1.0])
        np.testing.assert_array_equal(expr.axis_kernel(Y), [1.0])


class TestEvaluate:
    def test_fused_matches_reference(self, rng):
        expr = bracket(
            (X, BracketOp.JUMP_WIDE), (Y, BracketOp.DOUBLE_SUM), (X, BracketOp.SUM_HALF), norm=8.0
        )
        data = rng.standard_normal((12, 10))
        for stagger in ((0, 0), (1, 0), (0, 1), (1, 1)):
            fused = evaluate(expr, data, 2, stagger)
            reference = evaluate(expr, data, 2, stagger, fused=False)
            np.testing.assert_allclose(fused, reference, atol=1e-13)

    def test_expansion_order_irrelevant(self, rng):
        expr = bracket(
            (X, BracketOp.JUMP_HALF), (Y, BracketOp.DOUBLE_JUMP), (Y, BracketOp.SUM_HALF)
        )
        data = rng.standard_normal((9, 11))
        xy = evaluate(expr, data, 2, fused=False, axis_order=(0, 1))
        yx = evaluate(expr, data, 2, fused=False, axis_order=(1, 0))
        np.testing.assert_allclose(xy, yx, atol=1e-13)

    def test_three_dimensional(self, rng):
        expr = bracket((0, BracketOp.JUMP_HALF), (1, BracketOp.SUM_HALF), (2, BracketOp.SUM_HALF))
        data = rng.standard_normal((6, 7, 8))
        out = evaluate(expr, data, 1)
        assert out.shape == (4, 5, 6)
        np.testing.assert_allclose(out, evaluate(expr, data, 1, fused=False), atol=1e-13)

    def test_reach_beyond_ghosts(self):
        expr = bracket((X, BracketOp.DOUBLE_JUMP), (X, BracketOp.DOUBLE_JUMP))
        with pytest.raises(StencilReachError):
            evaluate(expr, np.zeros((8, 8)), ghost=1)

    def test_extension_within_ghosts(self):
        data = np.arange(6.0)[:, None] * np.ones((1, 4))
        out = evaluate(bracket((X, BracketOp.JUMP_HALF)), data, 1, extend=((1, 0), (0, 0)))
        assert out.shape == (5, 2)

    def test_extension_beyond_ghosts(self):
        with pytest.raises(StencilReachError):
            evaluate(
                bracket((X, BracketOp.JUMP_HALF)), np.zeros((6, 4)), 1, extend=((0, 1), (0, 0))
            )


class TestFields:
    def test_apply_bracket_derives_layout(self, rng, small_grid):
        f = _periodic(rng, small_grid)
        out = apply_bracket(bracket((X, BracketOp.JUMP_HALF)), f, small_grid)
        assert out.layout is Layout.EDGE_Y
        expr = bracket((X, BracketOp.JUMP_HALF), (Y, BracketOp.SUM_HALF))
        assert apply_bracket(expr, f, small_grid).layout is Layout.NODE

    def test_avg_perp_constant(self, small_grid):
        f = fill_ghosts(Field.from_interior(small_grid, np.full(small_grid.cells, 3.0)), small_grid)
        out = avg_perp(f, small_grid, axis=1)
        assert out.layout is Layout.CELL
        np.testing.assert_allclose(out.interior(small_grid), 3.0)


class TestSymbol:
    @pytest.mark.parametrize("stagger", [(0, 0), (1, 1), (1, 0)])
    def test_plane_wave_eigenvalue(self, stagger):
        """Applying an expression to exp(i beta . j) multiplies it by the symbol."""
        grid = Grid.uniform(16, 16, ghost=2)
        beta = (2 * np.pi * 3 / 16, 2 * np.pi * 5 / 16)
        i, j = np.meshgrid(np.arange(-2, 18), np.arange(-2, 18), indexing="ij")
        wave = np.exp(1j * (beta[0] * i + beta[1] * j))
        expr = bracket((X, BracketOp.JUMP_WIDE), (Y, BracketOp.DOUBLE_SUM), norm=8.0)
        out = evaluate(expr, wave, 2, stagger)
        expected = symbol(expr, beta, stagger) * wave[grid.interior]
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_forward_jump_symbol(self):
        beta = 0.7
        assert symbol(bracket((X, BracketOp.JUMP_HALF)), (beta, 0.0)) == pytest.approx(
            np.exp(1j * beta) - 1.0
        )

    def test_broadcasts(self):
        b = np.linspace(-np.pi, np.pi, 5)
        s = symbol(bracket((X, BracketOp.JUMP_HALF)), (b[:, None], b[None, :]))
        assert np.shape(s) == (5, 5)


class TestOperators:
    @pytest.mark.parametrize("family", list(OperatorFamily))
    def test_summation_by_parts(self, rng, periodic_grid, family):
        """sum u D v = - sum (D' u) v on a periodic grid."""
        grid = periodic_grid
        ops = OperatorSet.build(family, grid.spacing)
        u, v = _periodic(rng, grid), _periodic(rng, grid)
        for axis in (X, Y):
            lhs = np.sum(u.interior(grid) * ops.d(axis, v.data, grid.ghost))
            rhs = -np.sum(ops.dp(axis, u.data, grid.ghost) * v.interior(grid))
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_yee_exact_on_linear(self):
        grid = Grid.uniform(8, 8, 2.0, 1.0)
        x, _ = np.meshgrid(*[np.arange(-1, 9) for _ in range(2)], indexing="ij")
        ops = operators_for(MaxwellSchemeId.YEE_ORIGINAL, grid.spacing)
        np.testing.assert_allclose(ops.d(X, x * grid.dx, 1), 1.0)
        np.testing.assert_allclose(ops.dp(Y, x * grid.dx, 1), 0.0)

    def test_yee_symbol_product(self):
        h, beta = 0.1, 0.9
        ops = OperatorSet.build(OperatorFamily.YEE, (h, h))
        fwd, bwd = ops.symbols((beta, 0.3))
        assert fwd[X] * bwd[X] == pytest.approx(-4 * np.sin(beta / 2) ** 2 / h**2)

    def test_extended_3d(self):
        ops = OperatorSet.build(OperatorFamily.EXTENDED, (0.1, 0.1, 0.1))
        assert ops.ndim == 3
        assert ops.exprs[0].norm == pytest.approx(0.4)

    def test_central_extended_is_2d(self):
        with pytest.raises(ValueError):
            OperatorSet.build(OperatorFamily.CENTRAL_EXTENDED, (0.1, 0.1, 0.1))

    def test_non_sequential_scheme(self):
        with pytest.raises(ValueError):
            operators_for(MaxwellSchemeId.UPWIND_SPLIT, (0.1, 0.1))
