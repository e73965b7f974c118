import math

import numpy as np
import pytest

from src.engine import spectral
from src.engine.errors import SolverError
from src.engine.spectral import (
    ComplexPolynomial,
    Wavenumber,
    amplification_matrix,
    amplification_matrix_3d,
    amplification_radius,
    beta_axis,
    beta_grid,
    bisect_bound,
    cfl_max,
    characteristic_polynomial,
    confirm_bound,
    power_iteration_radius,
    scheme_symbol,
    schur_unit_disc,
    spectral_radius,
    stability_table,
)
from src.models.schemes import CFL_MAX, AcousticSchemeId, MaxwellSchemeId

S = MaxwellSchemeId
SEQUENTIAL_2D = [
    S.YEE_ORIGINAL,
    S.YEE_COLLOCATED,
    S.YEE_COLLOCATED_EXPLICIT,
    S.YEE_COLLOCATED_EXTENDED,
    S.YEE_EXTENDED_STAGGERED,
    S.CENTRAL,
    S.CENTRAL_EXTENDED,
]


def _random_beta(rng, n=1000):
    return [rng.uniform(-math.pi, math.pi, n), rng.uniform(-math.pi, math.pi, n)]


class TestWavenumbers:
    def test_range_checked(self):
        with pytest.raises(ValueError):
            Wavenumber(4.0, 0.0)

    def test_translations(self):
        w = Wavenumber(math.pi, 0.0)
        assert w.translations[0] == pytest.approx(-1.0)
        assert Wavenumber(0.1, 0.2, 0.3).betas == (0.1, 0.2, 0.3)

    def test_axis_contains_corners(self):
        axis = beta_axis(10)
        for corner in (0.0, math.pi / 2, -math.pi / 2, math.pi, -math.pi):
            assert np.any(np.isclose(axis, corner, atol=0.0))

    def test_grid_is_flat(self):
        bx, by = beta_grid(5)
        assert bx.shape == by.shape
        assert bx.ndim == 1


class TestAmplification:
    @pytest.mark.parametrize("scheme", SEQUENTIAL_2D)
    def test_one_is_an_eigenvalue(self, rng, scheme):
        a = amplification_matrix(scheme, _random_beta(rng), 0.6)
        smallest = np.linalg.svd(a - np.eye(3), compute_uv=False)[..., -1]
        assert np.max(smallest) < 1e-12

    @pytest.mark.parametrize("scheme", SEQUENTIAL_2D)
    def test_laplacian_symbol_is_real_and_non_positive(self, rng, scheme):
        s = scheme_symbol(scheme, _random_beta(rng)).laplacian
        assert np.max(np.abs(np.imag(s))) < 1e-12
        assert np.max(np.real(s)) < 1e-12

    @pytest.mark.parametrize("scheme", SEQUENTIAL_2D)
    def test_closed_form_radius_matches_eigenvalues(self, rng, scheme):
        beta = _random_beta(rng, 200)
        ratio = 0.8 * CFL_MAX[scheme]
        closed = amplification_radius(scheme, beta, ratio)
        numeric = spectral_radius(amplification_matrix(scheme, beta, ratio))
        np.testing.assert_allclose(closed, np.maximum(numeric, 1.0), atol=1e-6)

    def test_yee_corner(self):
        beta = [np.array([math.pi]), np.array([math.pi])]
        assert amplification_radius(S.YEE_ORIGINAL, beta, 0.7)[0] <= 1.0 + 1e-12
        assert amplification_radius(S.YEE_ORIGINAL, beta, 0.72)[0] > 1.0

    def test_acoustic_matches_matrix(self, rng):
        beta = _random_beta(rng, 200)
        scheme = AcousticSchemeId.YEE_COLLOCATED_EXTENDED
        for ratio in (0.3, 0.6):
            closed = amplification_radius(scheme, beta, ratio, eps=0.5)
            numeric = spectral_radius(amplification_matrix(scheme, beta, ratio, eps=0.5))
            np.testing.assert_allclose(closed, np.maximum(numeric, 1.0), atol=1e-6)

    def test_forward_euler_dissipates(self, rng):
        radius = amplification_radius(S.UPWIND_SPLIT, _random_beta(rng), 0.4)
        assert np.max(radius) <= 1.0 + 1e-12
        assert np.min(radius) < 1.0

    def test_wavenumber_argument(self):
        a = amplification_matrix(S.CENTRAL, Wavenumber(0.5, -0.5), 0.9)
        assert a.shape == (3, 3)

    def test_rejects_3d_beta(self):
        with pytest.raises(ValueError):
            amplification_matrix(S.YEE_ORIGINAL, (0.1, 0.2, 0.3), 0.5)


class TestPolynomials:
    def test_characteristic_polynomial(self, rng):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        expected = np.poly(a)[::-1]
        np.testing.assert_allclose(characteristic_polynomial(a).array, expected, atol=1e-10)

    @pytest.mark.parametrize("scheme", SEQUENTIAL_2D)
    def test_cubic_vanishes_at_one(self, rng, scheme):
        for beta in zip(*_random_beta(rng, 50)):
            f = characteristic_polynomial(amplification_matrix(scheme, beta, 0.5))
            assert abs(f(1.0)) < 1e-12

    def test_trim_and_degree(self):
        f = ComplexPolynomial.of([1.0, 2.0, 1e-20])
        assert f.trimmed().degree == 1
        assert f.reciprocal().coeffs == (1e-20, 2.0, 1.0)
        assert f.derivative().coeffs == (2.0, 2e-20)

    def test_unit_circle_roots(self):
        assert schur_unit_disc(ComplexPolynomial.of([-1.0, 0.0, 1.0]))
        assert not schur_unit_disc(ComplexPolynomial.of([-4.0, 0.0, 1.0]))

    def test_rejects_constant(self):
        with pytest.raises(ValueError):
            schur_unit_disc(ComplexPolynomial.of([3.0]))

    @pytest.mark.parametrize("dt", [0.5, 0.9, 1.0, 1.1])
    def test_sequential_quadratic(self, dt):
        """z^2 - z (2 - 4 dt^2) + 1: roots on the circle iff dt <= 1."""
        f = ComplexPolynomial.of([1.0, -(2.0 - 4.0 * dt * dt), 1.0])
        assert schur_unit_disc(f) == (dt <= 1.0)

    def test_agrees_with_root_finding(self, rng):
        margin = 1e-6
        checked = 0
        for _ in range(1000):
            degree = int(rng.integers(1, 7))
            coeffs = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
            f = ComplexPolynomial.of(coeffs)
            moduli = np.abs(f.roots())
            if np.any(np.abs(moduli - 1.0) < margin):
                continue
            assert schur_unit_disc(f) == bool(np.all(moduli <= 1.0))
            checked += 1
        assert checked > 900

    def test_agrees_inside_disc(self, rng):
        for _ in range(200):
            degree = int(rng.integers(1, 7))
            radii = rng.uniform(0.0, 0.95, degree)
            roots = radii * np.exp(1j * rng.uniform(0, 2 * math.pi, degree))
            assert schur_unit_disc(ComplexPolynomial.of(np.poly(roots)[::-1]))

    @pytest.mark.parametrize("scale", [1e-8, 1.0, 1e8])
    def test_margins_follow_polynomial_scale(self, scale):
        # z^2 + 1 + delta: roots on the circle up to delta / 2
        assert schur_unit_disc(ComplexPolynomial.of([scale * (1 + 1e-12), 0.0, scale]))
        assert not schur_unit_disc(ComplexPolynomial.of([scale * (1 + 1e-6), 0.0, scale]))
        inside = np.poly([0.99, -0.5])[::-1]
        outside = np.poly([1.01, -0.5])[::-1]
        assert schur_unit_disc(ComplexPolynomial.of(scale * inside))
        assert not schur_unit_disc(ComplexPolynomial.of(scale * outside))


class TestBounds:
    def test_bisect(self):
        assert bisect_bound(lambda x: x <= 0.3, 1.0, 1e-6) == pytest.approx(0.3, abs=1e-6)
        assert bisect_bound(lambda x: x <= 2.5, 1.0, 1e-6) == pytest.approx(2.5, abs=1e-6)

    def test_bisect_unbounded(self):
        assert math.isinf(bisect_bound(lambda x: True, 1.0, 1e-6))

    @pytest.mark.parametrize("scheme", SEQUENTIAL_2D + [S.UPWIND_SPLIT])
    def test_tabulated_cfl(self, scheme):
        bound = cfl_max(scheme, beta_samples=64, bisect_tol=1e-4, threads=2)
        assert bound == pytest.approx(CFL_MAX[scheme], abs=0.01)

    def test_reference_scheme_stable_at_tabulated_cfl(self):
        beta = beta_grid(33)
        radius = amplification_radius(S.STAT_PRES_REFERENCE, beta, 0.5)
        assert np.max(radius) <= 1.0 + 1e-10

    @pytest.mark.slow
    def test_full_resolution_table(self):
        for row in stability_table(SEQUENTIAL_2D, beta_samples=128):
            assert row.cfl_numeric == pytest.approx(row.cfl_reference, abs=0.01)

    def test_three_dimensional_radius(self):
        beta = beta_grid(17, 3)
        assert np.max(amplification_radius(S.YEE_EXTENDED_3D, beta, 0.99)) <= 1.0 + 1e-10
        assert np.max(amplification_radius(S.YEE_EXTENDED_3D, beta, 1.01)) > 1.0 + 1e-6

    @pytest.mark.slow
    def test_three_dimensional(self):
        bound = cfl_max(S.YEE_EXTENDED_3D, beta_samples=64, bisect_tol=1e-4)
        assert bound == pytest.approx(1.0, abs=0.01)

    def test_acoustic_cfl_matches_maxwell(self):
        bound = cfl_max(AcousticSchemeId.CENTRAL_EXTENDED, beta_samples=64)
        assert bound == pytest.approx(2.0, abs=0.01)

    def test_rejects_few_samples(self):
        with pytest.raises(ValueError):
            cfl_max(S.YEE_ORIGINAL, beta_samples=63)

    def test_table_rows(self):
        rows = stability_table([S.YEE_ORIGINAL, AcousticSchemeId.YEE_ORIGINAL], beta_samples=64)
        assert [r.scheme for r in rows] == ["yee", "yee"]
        assert rows[0].cfl_reference == pytest.approx(1 / math.sqrt(2))

    def test_cfl_max_confirms_bound(self, monkeypatch):
        calls = []
        monkeypatch.setattr(spectral, "confirm_bound", lambda *args: calls.append(args))
        bound = cfl_max(S.YEE_ORIGINAL, beta_samples=64)
        assert len(calls) == 1
        assert calls[0][0] is S.YEE_ORIGINAL
        assert calls[0][1] == bound


class TestConfirmation:
    def test_accepts_below_bound(self):
        confirm_bound(S.YEE_ORIGINAL, 0.70, beta_grid(64))
        confirm_bound(S.UPWIND_SPLIT, 0.49, beta_grid(64))
        confirm_bound(AcousticSchemeId.CENTRAL_EXTENDED, 1.99, beta_grid(64))

    def test_rejects_above_bound(self):
        with pytest.raises(SolverError):
            confirm_bound(S.YEE_ORIGINAL, 0.75, beta_grid(64))

    def test_three_dimensional(self):
        confirm_bound(S.YEE_EXTENDED_3D, 0.99, beta_grid(9, 3))
        with pytest.raises(SolverError):
            confirm_bound(S.YEE_EXTENDED_3D, 1.05, beta_grid(9, 3))

    def test_matrix_3d_matches_closed_form(self, rng):
        beta = [rng.uniform(-math.pi, math.pi, 50) for _ in range(3)]
        np.testing.assert_allclose(
            spectral_radius(amplification_matrix_3d(beta, 0.9)),
            amplification_radius(S.YEE_EXTENDED_3D, beta, 0.9),
            rtol=1e-8,
        )
        np.testing.assert_array_equal(amplification_matrix_3d((0.0, 0.0, 0.0), 0.5), np.eye(6))


class TestPowerIteration:
    def test_diagonal(self):
        assert power_iteration_radius(np.diag([0.5, -0.9, 0.2])) == pytest.approx(0.9, rel=1e-9)

    def test_rotation(self):
        c, s = math.cos(0.3), math.sin(0.3)
        a = 0.8 * np.array([[c, -s], [s, c]])
        assert power_iteration_radius(a) == pytest.approx(0.8, rel=1e-12)

    def test_jordan_block(self):
        estimate = power_iteration_radius(np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert estimate == pytest.approx(1.0, abs=2e-3)

    def test_batched_against_eigenvalues(self, rng):
        beta = _random_beta(rng, 20)
        a = amplification_matrix(S.UPWIND_SPLIT, beta, 0.4)
        np.testing.assert_allclose(power_iteration_radius(a), spectral_radius(a), rtol=2e-2)

    def test_needs_iterations(self):
        with pytest.raises(ValueError):
            power_iteration_radius(np.eye(3), iterations=1)
