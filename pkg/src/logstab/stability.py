"""Interpolation bounds and the logarithmic stability kernel.

Pure scalar formulas: the two-endpoint interpolation bound for trajectory
norms, the Gamma-type kernel that converts an observation norm into a
reconstruction bound, and the monotone correction ratio used when the
observation constant differs from the admissibility constant.  Everything
downstream of the operator modules funnels through these functions, so they
validate aggressively and stay in the log domain wherever underflow threatens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conformal import StripGeometry
from .specfun import gamma_lower_ratio

__all__ = [
    "StabilityParams",
    "StabilityBound",
    "validate_params",
    "logconvexity_bound",
    "gamma_kernel",
    "stability_rhs",
    "r_monotone_residuals",
]

VIOLATION_SLACK = 1e-9


@dataclass
class StabilityParams:
    """Parameter bundle for a conditional-stability estimate.

    Attributes
    ----------
    theta : float
        Observation horizon, positive.
    eps : float
        Regularity exponent of the admissible set, in (0, 1).
    M : float
        Admissible-set radius in the smoothness norm, positive.
    p : float
        Interpolation exponent; admissible range is ``1 < p < 1/(1 - eps)``.
    s : float
        Stability exponent; admissible range is ``0 < s < 1 - 1/p``.
    K : float
        Sector envelope constant of the semigroup, at least 1.
    kappa : float
        Sector envelope growth rate, non-negative.
    kappa_obs : float, optional
        Observability constant, positive when supplied.
    kappa_adm : float, optional
        Admissibility constant, positive when supplied.

    Instances are permitted to hold out-of-range ``p`` and ``s`` so that
    :func:`validate_params` can report violations as data.
    """

    theta: float
    eps: float
    M: float
    p: float
    s: float
    K: float = 1.0
    kappa: float = 0.0
    kappa_obs: float | None = None
    kappa_adm: float | None = None

    @property
    def k0(self) -> float:
        """Envelope constant transported to the final time, K e^(kappa theta)."""
        return self.K * math.exp(self.kappa * self.theta)

    @property
    def kappa_m(self) -> float:
        """Scale used to normalize final-time data; fixed to the radius M."""
        return self.M


def validate_params(params: StabilityParams) -> list[str]:
    """Check a parameter bundle and return the names of violated fields.

    Returns an empty list when every constraint holds.  The two coupled
    constraints are ``1 < p < 1/(1 - eps)`` and ``0 < s < 1 - 1/p``; the rest
    are plain sign and range conditions.
    """
    bad: list[str] = []
    if not (params.theta > 0.0 and math.isfinite(params.theta)):
        bad.append("theta")
    if not (0.0 < params.eps < 1.0):
        bad.append("eps")
    if not (params.M > 0.0 and math.isfinite(params.M)):
        bad.append("M")
    if "eps" not in bad:
        if not (1.0 < params.p < 1.0 / (1.0 - params.eps)):
            bad.append("p")
    elif not (params.p > 1.0):
        bad.append("p")
    if params.p > 1.0:
        if not (0.0 < params.s < 1.0 - 1.0 / params.p):
            bad.append("s")
    elif not (params.s > 0.0):
        bad.append("s")
    if not (params.K >= 1.0):
        bad.append("K")
    if not (params.kappa >= 0.0):
        bad.append("kappa")
    if params.kappa_obs is not None and not (params.kappa_obs > 0.0):
        bad.append("kappa_obs")
    if params.kappa_adm is not None and not (params.kappa_adm > 0.0):
        bad.append("kappa_adm")
    return bad


def logconvexity_bound(
    t: float,
    w_t: float,
    M: float,
    final_norm: float,
    K: float = 1.0,
    kappa: float = 0.0,
    theta: float = 1.0,
) -> float:
    """Two-endpoint interpolation bound for the trajectory norm at time t.

    Evaluates ``K * exp(kappa (t - theta w)) * M^(1-w) * final_norm^w`` with
    ``w = w_t``.  With a unit envelope (``K=1``, ``kappa=0``) and the flat
    weight ``w = t/theta`` this is the classical log-convexity bound between
    the initial norm ``M`` and the final norm.

    The product is assembled in the log domain so that final norms down to
    the smallest positive double do not underflow prematurely.
    """
    if not (theta > 0.0):
        raise ValueError(f"theta must be positive, got {theta}")
    if not (0.0 <= t <= theta * (1.0 + 1e-12)):
        raise ValueError(f"t must lie in [0, theta={theta}], got {t}")
    if not (-1e-12 <= w_t <= 1.0 + 1e-12):
        raise ValueError(f"weight must lie in [0, 1], got {w_t}")
    if M < 0.0 or final_norm < 0.0:
        raise ValueError("norms must be non-negative")
    if K < 1.0 or kappa < 0.0:
        raise ValueError("envelope constants require K >= 1 and kappa >= 0")
    w = min(max(w_t, 0.0), 1.0)
    envelope = K * math.exp(kappa * (t - theta * w))
    if M == 0.0 or final_norm == 0.0:
        # 0^0 = 1 convention keeps the endpoint values M and final_norm
        return envelope * M ** (1.0 - w) * final_norm**w
    return envelope * math.exp((1.0 - w) * math.log(M) + w * math.log(final_norm))


def gamma_kernel(obs_norm: float, phi: float, c: float) -> float:
    """Logarithmic stability kernel evaluated at an observation norm.

    For ``z = -c log(obs_norm)`` the kernel is

        (Gamma(1/phi) - Gamma(1/phi, z)) / (z^(1/phi) * phi),

    which is exactly the integral of ``obs_norm^(c u^phi)`` for ``u`` in
    ``[0, 1]``.  It increases strictly in ``obs_norm`` from 0 to 1 and decays
    only logarithmically as the observation vanishes, which is the signature
    of conditional (logarithmic) stability.

    Parameters
    ----------
    obs_norm : float
        Observation size in (0, 1); values down to ~1e-300 are handled in
        the log domain.
    phi : float
        Kernel exponent, at least 1 (equals pi/(2 psi) upstream).
    c : float
        Positive rate constant (equals c_psi * p upstream).

    Notes
    -----
    For ``phi = 1`` the kernel has the closed form
    ``(obs_norm^c - 1) / (c log obs_norm)``.
    """
    if not (0.0 < obs_norm < 1.0):
        raise ValueError(f"obs_norm must lie in (0, 1), got {obs_norm}")
    if not (phi >= 1.0 and math.isfinite(phi)):
        raise ValueError(f"kernel exponent phi must be >= 1, got {phi}")
    if not (c > 0.0 and math.isfinite(c)):
        raise ValueError(f"kernel rate c must be positive, got {c}")
    z = -c * math.log(obs_norm)
    return gamma_lower_ratio(1.0 / phi, z)


@dataclass(frozen=True)
class StabilityBound:
    """Reconstruction bound for an initial state from an observation norm.

    Attributes
    ----------
    exact : float
        Kernel-form bound ``K1 * gamma_kernel(obs, phi, c)^(s/p)``.
    simplified : float
        Looser closed form with the upper Gamma tail dropped,
        ``K1 * (Gamma(1/phi) / (z^(1/phi) phi))^(s/p)``; always >= exact.
    kernel : float
        The kernel value itself.
    phi : float
        Kernel exponent used.
    c : float
        Kernel rate used (c_psi * p).
    """

    exact: float
    simplified: float
    kernel: float
    phi: float
    c: float


def stability_rhs(
    obs_norm: float,
    params: StabilityParams,
    geom: StripGeometry,
    K1: float = 1.0,
) -> StabilityBound:
    """Right-hand side of the conditional stability estimate.

    Parameters
    ----------
    obs_norm : float
        Observation norm in (0, 1).  Larger values leave the logarithmic
        regime and are rejected.
    params : StabilityParams
        Must pass :func:`validate_params`.
    geom : StripGeometry
        Supplies ``phi`` and ``c_psi``.
    K1 : float
        Envelope constant multiplying both forms, positive.

    Returns
    -------
    StabilityBound
        Exact kernel form and the simplified power-of-log form; the
        simplified value always dominates the exact one.
    """
    violations = validate_params(params)
    if violations:
        raise ValueError(f"invalid stability parameters: {', '.join(violations)}")
    if not (0.0 < obs_norm < 1.0):
        raise ValueError(f"obs_norm must lie in (0, 1), got {obs_norm}")
    if not (K1 > 0.0):
        raise ValueError(f"K1 must be positive, got {K1}")
    phi, c_psi = geom.phi, geom.c_psi
    c = c_psi * params.p
    power = params.s / params.p
    kern = gamma_kernel(obs_norm, phi, c)
    z = -c * math.log(obs_norm)
    simplified_core = math.gamma(1.0 / phi) / (z ** (1.0 / phi) * phi)
    return StabilityBound(
        exact=K1 * kern**power,
        simplified=K1 * simplified_core**power,
        kernel=kern,
        phi=phi,
        c=c,
    )


def r_monotone_residuals(
    c: float,
    phi: float,
    sigma: float,
    grid: np.ndarray,
) -> np.ndarray:
    """Consecutive differences of the kernel transfer ratio along a grid.

    The ratio ``r(x) = gamma_kernel(sigma x) / gamma_kernel(x)`` moves an
    estimate between observation scales differing by the factor ``sigma``.
    It is non-decreasing for ``sigma > 1``, non-increasing for ``sigma < 1``,
    and constant 1 for ``sigma = 1``; the returned differences make those
    sign patterns directly testable.

    Parameters
    ----------
    c, phi : float
        Kernel rate and exponent.
    sigma : float
        Positive scale factor between the two observation levels.
    grid : ndarray
        Strictly increasing points inside ``(0, min(1, 1/sigma))`` so that
        both kernel arguments stay in (0, 1).

    Returns
    -------
    ndarray
        ``r(grid[1:]) - r(grid[:-1])``, one entry per consecutive pair.
    """
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ValueError(f"sigma must be positive, got {sigma}")
    pts = np.asarray(grid, dtype=float)
    if pts.ndim != 1 or pts.size < 2:
        raise ValueError("grid must be a 1-D array with at least two points")
    upper = min(1.0, 1.0 / sigma)
    if not (np.all(pts > 0.0) and np.all(pts < upper)):
        raise ValueError(f"grid must lie strictly inside (0, {upper})")
    if not np.all(np.diff(pts) > 0.0):
        raise ValueError("grid must be strictly increasing")
    ratio = np.array(
        [gamma_kernel(sigma * x, phi, c) / gamma_kernel(x, phi, c) for x in pts]
    )
    return np.diff(ratio)
