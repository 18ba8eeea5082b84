"""Ornstein-Uhlenbeck semigroup: covariances, Mehler expectation, weighted norms.

The Kolmogorov semigroup of ``dX = BX dt + sqrt(2Q) dW`` acts on functions by

    (T(t) f)(x) = E[f(e^{tB} x + G_t)],   G_t ~ N(0, 2 Q_t),

where ``Q_t`` solves the differential Lyapunov equation and converges to the
steady-state solution ``Q_inf`` of ``B X + X B^T = -Q``.  The invariant
measure is the Gaussian with covariance ``2 Q_inf``.

This module gives:

* exact ``Q_t`` through the identity ``Q_t = Q_inf - e^{tB} Q_inf e^{tB^T}``
  (valid for stable drifts) plus an independent Runge-Kutta integrator of the
  Lyapunov ODE usable for cross-checks and non-stable drifts,
* ``kolmogorov_apply``, a tensor Gauss-Hermite evaluation of the Mehler
  expectation, which is an operator-free oracle for the Galerkin semigroup,
* the invariant density and an FFT-based weighted Sobolev norm of a function
  against a Gaussian-decay weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import SingularGramianError
from .operators import (
    DiscreteGenerator,
    DriftSpec,
    Gramian,
    _hermgauss,
    lyapunov_gramian,
)

__all__ = [
    "OUModel",
    "gramian_t",
    "finite_time_gramian",
    "kolmogorov_apply",
    "invariant_density",
    "weighted_sobolev_norm",
    "TEST_FUNCTIONS",
]

GRAMIAN_DET_FLOOR = 1e-300
DEFAULT_RK_STEPS = 400
FFT_GRID = 128
FFT_RADIUS_SIGMAS = 12.0


@dataclass(frozen=True)
class OUModel:
    """Drift/diffusion pair with its steady-state covariance.

    ``weight_variant`` selects the Gaussian decay weight used by
    :func:`weighted_sobolev_norm`: ``"inverse"`` uses
    ``exp(-x^T Q_inf^{-1} x / 8)`` (the square root of the invariant density
    up to normalization) and ``"squared"`` uses ``exp(-x^T Q_inf^2 x / 8)``.
    """

    spec: DriftSpec
    gramian: Gramian = field(default=None)  # type: ignore[assignment]
    quadrature_order: int = 40
    weight_variant: str = "inverse"

    def __post_init__(self) -> None:
        if self.gramian is None:
            object.__setattr__(self, "gramian", lyapunov_gramian(self.spec))
        if self.quadrature_order < 2:
            raise ValueError("quadrature order must be at least 2")
        if self.weight_variant not in ("inverse", "squared"):
            raise ValueError(
                f"weight_variant must be 'inverse' or 'squared', got {self.weight_variant!r}"
            )

    @classmethod
    def from_drift(cls, B, Q=None, **kwargs) -> "OUModel":
        return cls(spec=DriftSpec(B=np.asarray(B, dtype=float), Q=Q), **kwargs)

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def q_inf(self) -> np.ndarray:
        return self.gramian.matrix


def gramian_t(model: OUModel, t: float) -> Gramian:
    """Finite-horizon covariance ``Q_t = int_0^t e^{sB} Q e^{sB^T} ds``, exactly.

    Uses ``Q_t = Q_inf - e^{tB} Q_inf e^{tB^T}``: both sides solve the same
    differential Lyapunov equation with the same initial value, and the
    steady-state term is available for every stable drift.
    """
    if not (t >= 0.0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and >= 0, got {t}")
    if t == 0.0:
        return Gramian(matrix=np.zeros_like(model.q_inf), horizon=0.0)
    E = expm(t * model.spec.B)
    X = model.q_inf - E @ model.q_inf @ E.T
    return Gramian(matrix=0.5 * (X + X.T), horizon=t)


def finite_time_gramian(spec: DriftSpec, t: float, steps: int = DEFAULT_RK_STEPS) -> Gramian:
    """Runge-Kutta integration of ``X' = B X + X B^T + Q`` from ``X(0) = 0``.

    Works for any drift, stable or not; serves as the independent route to
    the same covariance that :func:`gramian_t` produces in closed form.
    """
    if not (t >= 0.0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and >= 0, got {t}")
    if steps < 1:
        raise ValueError("need at least one step")
    B, Q = spec.B, spec.Q
    X = np.zeros_like(Q)
    if t == 0.0:
        return Gramian(matrix=X, horizon=0.0)

    def rhs(M: np.ndarray) -> np.ndarray:
        return B @ M + M @ B.T + Q

    h = t / steps
    for _ in range(steps):
        k1 = rhs(X)
        k2 = rhs(X + 0.5 * h * k1)
        k3 = rhs(X + 0.5 * h * k2)
        k4 = rhs(X + h * k3)
        X = X + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    X = 0.5 * (X + X.T)
    return Gramian(matrix=X, horizon=t)


def kolmogorov_apply(model: OUModel, t: float, f, points: np.ndarray) -> np.ndarray:
    """Evaluate ``(T(t) f)(x) = E[f(e^{tB} x + N(0, 2 Q_t))]`` at given points.

    The Gaussian expectation is computed with a tensor Gauss-Hermite rule of
    ``model.quadrature_order`` nodes per dimension, after a Cholesky factor
    of ``2 Q_t`` maps the standard nodes onto the correct covariance.  This
    route never touches the Galerkin matrix, which is what makes it usable
    as an independent check of the operator semigroup.

    Parameters
    ----------
    model : OUModel
    t : float
        Non-negative time; ``t = 0`` evaluates ``f`` directly.
    f : callable
        Maps an (m, N) array of points to an (m,) array of values.
    points : ndarray
        Shape (m, N) or (N,) for a single point.

    Raises
    ------
    SingularGramianError
        If ``det(2 Q_t)`` falls below ``1e-300`` while ``t > 0`` (the
        covariance is numerically rank-deficient, so no stable Cholesky
        factor exists).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != model.dim:
        raise ValueError(f"points have dimension {pts.shape[1]}, model has {model.dim}")
    if not (t >= 0.0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and >= 0, got {t}")
    if t == 0.0:
        return np.asarray(f(pts), dtype=float)
    cov = 2.0 * gramian_t(model, t).matrix
    det = float(np.linalg.det(cov))
    if det < GRAMIAN_DET_FLOOR:
        raise SingularGramianError(
            f"covariance determinant {det:.3e} below floor {GRAMIAN_DET_FLOOR:.0e} at t={t}"
        )
    C = np.linalg.cholesky(cov)
    drifted = pts @ expm(t * model.spec.B).T

    n = model.dim
    y, w = _hermgauss(model.quadrature_order)
    grids = np.meshgrid(*([y] * n), indexing="ij")
    z = math.sqrt(2.0) * np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*([w] * n), indexing="ij")
    weights = np.ones(z.shape[0])
    for g in wgrids:
        weights = weights * g.ravel()
    weights /= math.pi ** (n / 2.0)

    shifts = z @ C.T
    out = np.empty(pts.shape[0])
    for i, x in enumerate(drifted):
        out[i] = float(weights @ np.asarray(f(x[None, :] + shifts), dtype=float))
    return out


def invariant_density(model: OUModel, points: np.ndarray) -> np.ndarray:
    """Density of the invariant Gaussian measure N(0, 2 Q_inf) at the points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != model.dim:
        raise ValueError(f"points have dimension {pts.shape[1]}, model has {model.dim}")
    cov = 2.0 * model.q_inf
    n = model.dim
    chol = np.linalg.cholesky(cov)
    sol = np.linalg.solve(chol, pts.T)
    quad = np.sum(sol**2, axis=0)
    log_det = 2.0 * float(np.sum(np.log(np.diag(chol))))
    log_norm = -0.5 * (n * math.log(2.0 * math.pi) + log_det)
    return np.exp(log_norm - 0.5 * quad)


def _weight_matrix(model: OUModel) -> np.ndarray:
    """Quadratic form S with weight exp(-x^T S x / 8)."""
    if model.weight_variant == "inverse":
        return np.linalg.inv(model.q_inf)
    return model.q_inf @ model.q_inf


def weighted_sobolev_norm(
    model: OUModel,
    s: float,
    f,
    basis=None,
    grid_points: int = FFT_GRID,
    radius_sigmas: float = FFT_RADIUS_SIGMAS,
) -> float:
    """Sobolev H^s norm of ``f`` times the model's Gaussian decay weight.

    The weighted function ``g = f * weight`` is sampled on a tensor grid wide
    enough that the Gaussian factor has decayed to negligible size, its
    Fourier transform is taken by FFT with the unitary continuum
    normalization, and the norm is

        || g ||_{H^s}^2 = sum (1 + |xi|^2)^s |g_hat(xi)|^2 (d xi)^N .

    ``f`` may be a callable mapping (m, N) points to (m,) values, or a
    coefficient vector (ndarray) over a Hermite polynomial basis passed as
    ``basis``; coefficient vectors are turned into callables through
    :meth:`~.operators.HermiteBasis.evaluate`.

    Only dimensions 1 and 2 are supported (the grid is dense).
    """
    if model.dim > 2:
        raise ValueError("weighted Sobolev norms support dimensions 1 and 2 only")
    if not math.isfinite(s) or s < 0.0:
        raise ValueError(f"smoothness s must be finite and >= 0, got {s}")
    if grid_points < 16:
        raise ValueError("need at least 16 grid points per dimension")
    if isinstance(f, np.ndarray):
        if basis is None:
            raise ValueError("coefficient-vector input requires the basis argument")
        coeffs = np.asarray(f, dtype=float)

        def f(pts, _basis=basis, _c=coeffs):  # noqa: F811 - deliberate rebind
            return _basis.evaluate(pts) @ _c

    n = model.dim
    S = _weight_matrix(model)
    sigma_max = math.sqrt(float(np.linalg.eigvalsh(2.0 * model.q_inf).max()))
    R = radius_sigmas * max(sigma_max, 1.0)
    axes = [np.linspace(-R, R, grid_points, endpoint=False) for _ in range(n)]
    dx = axes[0][1] - axes[0][0]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)

    values = np.asarray(f(pts), dtype=float)
    quad = np.einsum("mi,ij,mj->m", pts, S, pts)
    g = (values * np.exp(-0.125 * quad)).reshape([grid_points] * n)

    g_hat = np.fft.fftn(g) * (dx / math.sqrt(2.0 * math.pi)) ** n
    freqs = 2.0 * math.pi * np.fft.fftfreq(grid_points, d=dx)
    fmesh = np.meshgrid(*([freqs] * n), indexing="ij")
    xi_sq = np.zeros_like(fmesh[0])
    for fm in fmesh:
        xi_sq = xi_sq + fm**2
    dxi = freqs[1] - freqs[0] if grid_points > 1 else 0.0
    total = float(np.sum((1.0 + xi_sq) ** s * np.abs(g_hat) ** 2) * abs(dxi) ** n)
    return math.sqrt(total)


def _fn_one(x: np.ndarray) -> np.ndarray:
    return np.ones(x.shape[0])


def _fn_coord1(x: np.ndarray) -> np.ndarray:
    return x[:, 0]


def _fn_coord2(x: np.ndarray) -> np.ndarray:
    return x[:, 1] if x.shape[1] > 1 else np.zeros(x.shape[0])


def _fn_quad1(x: np.ndarray) -> np.ndarray:
    return x[:, 0] ** 2


def _fn_cross(x: np.ndarray) -> np.ndarray:
    return x[:, 0] * x[:, 1] if x.shape[1] > 1 else np.zeros(x.shape[0])


def _fn_cubic1(x: np.ndarray) -> np.ndarray:
    return x[:, 0] ** 3


def _fn_quartic1(x: np.ndarray) -> np.ndarray:
    return x[:, 0] ** 4


def _fn_gauss(x: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * np.sum(x**2, axis=1))


TEST_FUNCTIONS = {
    "one": _fn_one,
    "coord1": _fn_coord1,
    "coord2": _fn_coord2,
    "quad1": _fn_quad1,
    "cross": _fn_cross,
    "cubic1": _fn_cubic1,
    "quartic1": _fn_quartic1,
    "gauss": _fn_gauss,
}


def galerkin_coefficients(gen: DiscreteGenerator, f) -> np.ndarray:
    """Project a function onto the generator's Hermite basis by quadrature.

    Exact whenever ``f`` is a polynomial of total degree within the
    quadrature's exactness range.
    """
    basis = gen.basis
    if basis is None or not hasattr(basis, "indices"):
        raise ValueError("generator does not carry a Hermite basis")
    pts, w = basis.quad_points()
    values = np.asarray(f(pts), dtype=float)
    table = basis.evaluate(pts)
    return table.T @ (w * values)
