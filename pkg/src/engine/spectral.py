"""Von Neumann stability analysis of the Maxwell and acoustics schemes.

A Fourier mode exp(i (beta_x i + beta_y j)) is mapped by one time step onto
A(beta) times itself. Sequential-explicit schemes have the eigenvalue 1 and
the roots of z^2 - z (2 + dt^2 S) + 1 with S = sum_a D_a D'_a, so their
spectral radius is evaluated in closed form; forward-Euler schemes go
through batched eigenvalues of the matrix. Every bisected CFL bound is then
re-checked with the Schur unit-disc criterion on the characteristic
polynomial and with power iteration.

Pure functions. No I/O.
"""

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.engine.errors import SolverError
from src.engine.maxwell import forward_euler_terms
from src.engine.operators import operators_for
from src.engine.stencils import symbol
from src.models.schemes import CFL_MAX, AcousticSchemeId, MaxwellSchemeId

logger = logging.getLogger(__name__)

S = MaxwellSchemeId
CORNERS = (0.0, math.pi / 2, -math.pi / 2, math.pi, -math.pi)


@dataclass(frozen=True)
class Wavenumber:
    """beta = k * dx per axis, each in [-pi, pi]."""

    beta_x: float
    beta_y: float
    beta_z: float | None = None

    def __post_init__(self) -> None:
        for b in self.betas:
            if abs(b) > math.pi + 1e-12:
                raise ValueError(f"Wavenumber components must lie in [-pi, pi], got {self.betas}")

    @property
    def betas(self) -> tuple[float, ...]:
        if self.beta_z is None:
            return (self.beta_x, self.beta_y)
        return (self.beta_x, self.beta_y, self.beta_z)

    @property
    def translations(self) -> tuple[complex, ...]:
        return tuple(complex(np.exp(1j * b)) for b in self.betas)


@dataclass(frozen=True)
class SchemeSymbol:
    """Fourier symbols of D and D' per axis."""

    d: tuple[complex | np.ndarray, ...]
    dp: tuple[complex | np.ndarray, ...]

    @property
    def laplacian(self) -> complex | np.ndarray:
        """S = sum_a D_a D'_a; real and non-positive for every sequential scheme."""
        return sum(a * b for a, b in zip(self.d, self.dp))  # type: ignore[return-value]


def scheme_symbol(
    scheme: MaxwellSchemeId,
    beta: Sequence[float] | Sequence[np.ndarray],
    spacing: Sequence[float] | None = None,
) -> SchemeSymbol:
    spacing = tuple(spacing) if spacing is not None else (1.0,) * len(beta)
    ops = operators_for(_operator_scheme(scheme), spacing)
    fwd, bwd = ops.symbols(beta)
    return SchemeSymbol(tuple(fwd), tuple(bwd))


def _operator_scheme(scheme: MaxwellSchemeId) -> MaxwellSchemeId:
    return S.YEE_COLLOCATED if scheme is S.YEE_COLLOCATED_EXPLICIT else scheme


def beta_axis(samples: int, include_corners: bool = True) -> np.ndarray:
    """Uniform samples on [-pi, pi] merged with the points 0, +-pi/2, +-pi."""
    axis = np.linspace(-math.pi, math.pi, samples)
    if include_corners:
        axis = np.union1d(axis, CORNERS)
    return axis


def beta_grid(samples: int, ndim: int = 2) -> list[np.ndarray]:
    """Flattened meshgrid of wavenumbers, one array per axis."""
    axis = beta_axis(samples)
    mesh = np.meshgrid(*([axis] * ndim), indexing="ij")
    return [m.ravel() for m in mesh]


# --- amplification matrices ---------------------------------------------------------


def amplification_matrix(
    scheme: MaxwellSchemeId | AcousticSchemeId,
    beta: Sequence[float] | Sequence[np.ndarray] | Wavenumber,
    ratio: float,
    spacing: Sequence[float] | None = None,
    c: float = 1.0,
    eps: float = 1.0,
) -> np.ndarray:
    """One-step amplification matrix, shape (..., 3, 3).

    Maxwell states are ordered (Bz, Ex, Ey), acoustic ones (p, u, v).
    ratio is dt / dx.
    """
    if isinstance(beta, Wavenumber):
        beta = beta.betas
    if len(beta) != 2:
        raise ValueError(f"amplification_matrix covers the 2D schemes, got {len(beta)} axes")
    spacing = tuple(spacing) if spacing is not None else (1.0, 1.0)
    dt = ratio * spacing[0]
    if isinstance(scheme, AcousticSchemeId):
        return _acoustic_matrix(scheme, beta, dt, spacing, c, eps)
    if scheme.is_sequential:
        sym = scheme_symbol(scheme, beta, spacing)
        dx_, dy_ = sym.d
        dpx, dpy = sym.dp
        shape = np.broadcast(*[np.asarray(b) for b in beta]).shape
        a = np.zeros(shape + (3, 3), dtype=complex)
        a[..., 0, 0] = 1.0
        a[..., 0, 1] = dt * dy_
        a[..., 0, 2] = -dt * dx_
        a[..., 1, 0] = dt * dpy
        a[..., 1, 1] = 1.0 + dt * dt * dpy * dy_
        a[..., 1, 2] = -dt * dt * dpy * dx_
        a[..., 2, 0] = -dt * dpx
        a[..., 2, 1] = -dt * dt * dpx * dy_
        a[..., 2, 2] = 1.0 + dt * dt * dpx * dx_
        return a
    return _forward_euler_matrix(scheme, beta, dt, spacing)


def _forward_euler_matrix(
    scheme: MaxwellSchemeId,
    beta: Sequence[float] | Sequence[np.ndarray],
    dt: float,
    spacing: Sequence[float],
) -> np.ndarray:
    shape = np.broadcast(*[np.asarray(b) for b in beta]).shape
    a = np.zeros(shape + (3, 3), dtype=complex)
    a[..., [0, 1, 2], [0, 1, 2]] = 1.0
    for term in forward_euler_terms(scheme, spacing[0], spacing[1]):
        a[..., term.target, term.source] += dt * term.coef * symbol(term.expr, beta)
    return a


def _acoustic_matrix(
    scheme: AcousticSchemeId,
    beta: Sequence[float] | Sequence[np.ndarray],
    dt: float,
    spacing: Sequence[float],
    c: float,
    eps: float,
) -> np.ndarray:
    sym = scheme_symbol(scheme.maxwell, beta, spacing)
    dx_, dy_ = sym.d
    dpx, dpy = sym.dp
    c2, k = c * c, 1.0 / (eps * eps)
    shape = np.broadcast(*[np.asarray(b) for b in beta]).shape
    a = np.zeros(shape + (3, 3), dtype=complex)
    a[..., 0, 0] = 1.0
    a[..., 0, 1] = -c2 * dt * dx_
    a[..., 0, 2] = -c2 * dt * dy_
    a[..., 1, 0] = -dt * k * dpx
    a[..., 1, 1] = 1.0 + c2 * dt * dt * k * dpx * dx_
    a[..., 1, 2] = c2 * dt * dt * k * dpx * dy_
    a[..., 2, 0] = -dt * k * dpy
    a[..., 2, 1] = c2 * dt * dt * k * dpy * dx_
    a[..., 2, 2] = 1.0 + c2 * dt * dt * k * dpy * dy_
    return a


def curl_matrices(
    beta: Sequence[float] | Sequence[np.ndarray], spacing: Sequence[float] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """3D curl symbols (C, C') with B' = B - dt C E and E' = E + dt C' B'."""
    sym = scheme_symbol(S.YEE_EXTENDED_3D, beta, spacing)
    shape = np.broadcast(*[np.asarray(b) for b in beta]).shape
    c = np.zeros(shape + (3, 3), dtype=complex)
    cp = np.zeros(shape + (3, 3), dtype=complex)
    for a in range(3):
        b1, b2 = (a + 1) % 3, (a + 2) % 3
        c[..., a, b2] = sym.d[b1]
        c[..., a, b1] = -sym.d[b2]
        cp[..., a, b2] = sym.dp[b1]
        cp[..., a, b1] = -sym.dp[b2]
    return c, cp


def amplification_matrix_3d(
    beta: Sequence[float] | Sequence[np.ndarray],
    ratio: float,
    spacing: Sequence[float] | None = None,
) -> np.ndarray:
    """One-step matrix of the 3D scheme on (B, E), shape (..., 6, 6)."""
    spacing = tuple(spacing) if spacing is not None else (1.0, 1.0, 1.0)
    dt = ratio * spacing[0]
    curl, curl_p = curl_matrices(beta, spacing)
    eye = np.eye(3, dtype=complex)
    a = np.zeros(curl.shape[:-2] + (6, 6), dtype=complex)
    a[..., :3, :3] = eye
    a[..., :3, 3:] = -dt * curl
    a[..., 3:, :3] = dt * curl_p
    a[..., 3:, 3:] = eye - dt * dt * curl_p @ curl
    return a


# --- polynomials and the unit-disc criterion -------------------------------------------


@dataclass(frozen=True)
class ComplexPolynomial:
    """Coefficients in ascending degree."""

    coeffs: tuple[complex, ...]

    @classmethod
    def of(cls, coeffs: Sequence[complex] | np.ndarray) -> "ComplexPolynomial":
        return cls(tuple(complex(c) for c in coeffs))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.array))) if self.coeffs else 0.0

    def trimmed(self, tol: float = 1e-14) -> "ComplexPolynomial":
        a = self.array
        cut = tol * self.norm
        n = len(a)
        while n > 1 and abs(a[n - 1]) <= cut:
            n -= 1
        return ComplexPolynomial.of(a[:n])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex | np.ndarray) -> complex | np.ndarray:
        return np.polyval(self.array[::-1], z)

    def reciprocal(self) -> "ComplexPolynomial":
        """f*(z) = sum_j conj(a_{n-j}) z^j"""
        return ComplexPolynomial.of(np.conj(self.array[::-1]))

    def derivative(self) -> "ComplexPolynomial":
        a = self.array
        if len(a) == 1:
            return ComplexPolynomial.of([0.0])
        return ComplexPolynomial.of(a[1:] * np.arange(1, len(a)))

    def roots(self) -> np.ndarray:
        return np.roots(self.trimmed().array[::-1])


def characteristic_polynomial(matrix: np.ndarray) -> ComplexPolynomial:
    """det(z I - A) by the Faddeev-LeVerrier recursion."""
    a = np.asarray(matrix, dtype=complex)
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    coeffs = np.zeros(n + 1, dtype=complex)  # ascending
    coeffs[n] = 1.0
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(a @ m) / k
    return ComplexPolynomial.of(coeffs)


def schur_unit_disc(f: ComplexPolynomial, tol: float | None = None) -> bool:
    """True when every zero of f lies in the closed unit disc.

    Reduces the degree by one per level: with f1 = (f*(0) f - f(0) f*) / z,
    f qualifies if |f*(0)| > |f(0)| and f1 qualifies, or if f1 vanishes
    identically and f' qualifies. Constants count as qualifying below the
    top level.

    f1 is divided by the max norm ||f|| so that it stays on the scale of f;
    both comparisons then use the margin tol * ||f||.
    """
    tol = settings.unit_circle_tol if tol is None else tol
    f = f.trimmed()
    if f.degree < 1:
        raise ValueError(f"schur_unit_disc needs a non-constant polynomial, got {f.coeffs}")
    return _schur(f, tol)


def _schur(f: ComplexPolynomial, tol: float) -> bool:
    f = f.trimmed()
    if f.degree < 1:
        return True
    a = f.array
    star = f.reciprocal().array
    fs0, f0 = star[0], a[0]
    scale = f.norm
    reduced = (fs0 * a - f0 * star)[1:] / scale
    if abs(fs0) > abs(f0) + tol * scale:
        return _schur(ComplexPolynomial.of(reduced), tol)
    if np.max(np.abs(reduced)) < tol * scale:
        return _schur(f.derivative(), tol)
    return False


# --- spectral radius and CFL bounds -------------------------------------------------------


def _quadratic_radius(s: np.ndarray, dt: float) -> np.ndarray:
    """max(1, |roots of z^2 - z (2 + dt^2 s) + 1|) elementwise."""
    b = 2.0 + dt * dt * np.asarray(s, dtype=complex)
    root = np.sqrt(b * b - 4.0)
    return np.maximum(1.0, np.maximum(np.abs((b + root) / 2.0), np.abs((b - root) / 2.0)))


def spectral_radius(matrices: np.ndarray) -> np.ndarray:
    return np.max(np.abs(np.linalg.eigvals(matrices)), axis=-1)


def power_iteration_radius(matrices: np.ndarray, iterations: int | None = None) -> np.ndarray:
    """Spectral radius as the geometric mean growth of ||A^k v|| over the second
    half of the iterations, batched over leading axes.

    Accurate to about log(cond) / iterations, so only a coarse cross-check.
    """
    iterations = settings.power_iterations if iterations is None else iterations
    if iterations < 2:
        raise ValueError(f"Need at least 2 power iterations, got {iterations}")
    a = np.asarray(matrices, dtype=complex)
    n = a.shape[-1]
    rng = np.random.default_rng(0)
    start = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = np.broadcast_to(start / np.linalg.norm(start), a.shape[:-1]).copy()
    warmup = iterations // 2
    log_growth = np.zeros(a.shape[:-2])
    for k in range(iterations):
        w = np.einsum("...ij,...j->...i", a, v)
        norm = np.maximum(np.linalg.norm(w, axis=-1), 1e-300)
        if k >= warmup:
            log_growth += np.log(norm)
        v = w / norm[..., None]
    return np.exp(log_growth / (iterations - warmup))


def amplification_radius(
    scheme: MaxwellSchemeId | AcousticSchemeId,
    beta: Sequence[np.ndarray],
    ratio: float,
    spacing: Sequence[float] | None = None,
    c: float = 1.0,
    eps: float = 1.0,
) -> np.ndarray:
    """Spectral radius of the amplification matrix at every sampled beta."""
    spacing = tuple(spacing) if spacing is not None else (1.0,) * len(beta)
    dt = ratio * spacing[0]
    if isinstance(scheme, AcousticSchemeId):
        sym = scheme_symbol(scheme.maxwell, beta, spacing)
        return _quadratic_radius(sym.laplacian, dt * c / eps)
    if scheme is S.YEE_EXTENDED_3D:
        curl, curl_p = curl_matrices(beta, spacing)
        # C' is the adjoint of C, so -C C' is Hermitian
        mu = np.linalg.eigvalsh(-curl @ curl_p)
        return np.max(_quadratic_radius(mu, dt), axis=-1)
    if scheme.is_sequential:
        return _quadratic_radius(scheme_symbol(scheme, beta, spacing).laplacian, dt)
    return spectral_radius(amplification_matrix(scheme, beta, ratio, spacing))


def bisect_bound(
    stable: Callable[[float], bool], hi: float, bisect_tol: float, max_hi: float = 64.0
) -> float:
    """Largest x in [0, hi*] with stable(x), assuming stability on an interval from 0."""
    lo = 0.0
    while stable(hi):
        lo, hi = hi, 2.0 * hi
        if hi > max_hi:
            logger.warning("Stability bound not bracketed below %s", max_hi)
            return math.inf
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _step_matrices(
    scheme: MaxwellSchemeId | AcousticSchemeId, beta: Sequence[np.ndarray], ratio: float
) -> np.ndarray:
    if scheme is S.YEE_EXTENDED_3D:
        return amplification_matrix_3d(beta, ratio)
    return amplification_matrix(scheme, beta, ratio)


def confirm_bound(
    scheme: MaxwellSchemeId | AcousticSchemeId, ratio: float, beta: Sequence[np.ndarray]
) -> None:
    """Re-examine a bisected bound on the wavenumbers it was found on.

    The Schur criterion must accept the characteristic polynomial at an evenly
    spread subset of beta, and power iteration must reproduce the eigenvalue
    radius at the worst wavenumber. Raises SolverError otherwise.
    """
    radii = amplification_radius(scheme, beta, ratio)
    n = radii.size
    worst = int(np.argmax(radii))
    spread = np.linspace(0, n - 1, min(n, settings.confirm_points)).astype(int)
    picks = np.union1d(spread, [worst])
    matrices = _step_matrices(scheme, [b[picks] for b in beta], ratio)
    for k, idx in enumerate(picks):
        if not schur_unit_disc(characteristic_polynomial(matrices[k])):
            at = tuple(round(float(b[idx]), 6) for b in beta)
            raise SolverError(
                f"Schur criterion rejects {scheme.value} at ratio {ratio:.6f}, beta={at}"
            )
    expected = float(radii[worst])
    estimate = float(power_iteration_radius(matrices[int(np.searchsorted(picks, worst))]))
    if abs(estimate - expected) > settings.power_iteration_rtol * max(expected, 1.0):
        raise SolverError(
            f"{scheme.value}: power iteration gives radius {estimate:.6g}, "
            f"eigenvalues give {expected:.6g}"
        )
    logger.debug(
        "%s bound %.6f confirmed at %d wavenumbers (power radius %.6f)",
        scheme.value, ratio, picks.size, estimate,
    )


def _chunks(beta: list[np.ndarray], parts: int) -> list[list[np.ndarray]]:
    idx = np.array_split(np.arange(beta[0].size), parts)
    return [[b[i] for b in beta] for i in idx if i.size]


def cfl_max(
    scheme: MaxwellSchemeId | AcousticSchemeId,
    beta_samples: int | None = None,
    bisect_tol: float | None = None,
    threads: int | None = None,
) -> float:
    """Largest dt/dx with spectral radius <= 1 + tol over the sampled wavenumbers (dx = dy).

    A finite bound is passed through confirm_bound before it is returned.
    """
    is_3d = scheme is S.YEE_EXTENDED_3D
    if beta_samples is None:
        beta_samples = settings.beta_samples_3d if is_3d else settings.beta_samples
    if beta_samples < settings.min_beta_samples:
        raise ValueError(
            f"beta_samples must be at least {settings.min_beta_samples}, got {beta_samples}"
        )
    bisect_tol = settings.bisect_tol if bisect_tol is None else bisect_tol
    workers = max(1, min(threads or settings.max_threads, settings.max_threads))
    beta = beta_grid(beta_samples, 3 if is_3d else 2)
    chunks = _chunks(beta, workers)
    tol = settings.unit_circle_tol

    with ThreadPoolExecutor(max_workers=workers) as pool:

        def stable(ratio: float) -> bool:
            radii = pool.map(
                lambda part: float(np.max(amplification_radius(scheme, part, ratio))), chunks
            )
            return max(radii) <= 1.0 + tol

        bound = bisect_bound(stable, 1.0, bisect_tol)
    if math.isfinite(bound):
        confirm_bound(scheme, bound, beta)
    logger.info("cfl_max(%s) = %.6f with %d samples per axis", scheme.value, bound, beta_samples)
    return bound


@dataclass(frozen=True)
class CflRow:
    scheme: str
    cfl_numeric: float
    cfl_reference: float


def stability_table(
    schemes: Sequence[MaxwellSchemeId | AcousticSchemeId] | None = None,
    beta_samples: int | None = None,
    bisect_tol: float | None = None,
    threads: int | None = None,
) -> list[CflRow]:
    """Numerical CFL bounds next to the tabulated ones."""
    if schemes is None:
        schemes = list(MaxwellSchemeId)
    rows = []
    for scheme in schemes:
        reference = CFL_MAX[scheme.maxwell if isinstance(scheme, AcousticSchemeId) else scheme]
        samples = beta_samples
        if scheme is S.YEE_EXTENDED_3D and beta_samples is not None:
            samples = min(beta_samples, settings.beta_samples_3d)
        bound = cfl_max(scheme, samples, bisect_tol, threads)
        if math.isinf(bound):
            raise SolverError(f"No finite stability bound found for {scheme.value}")
        rows.append(CflRow(scheme.value, bound, reference))
    return rows
