"""Harmonic interpolation weight for a sector-shaped strip.

A semigroup that is analytic in a sector of half-angle ``psi`` gives access to
values of a trajectory on a curvilinear strip spanned by the segment
``[0, theta]``.  The harmonic measure of the far end of that strip, restricted
to the segment, is the weight ``w(t)`` used by every interpolation bound in
this package.  It is computed through the boundary map

    h(x) = (theta sin(psi) / pi) * B_s(a, 1 - a),
    s = sin(pi x / (2 theta))^2,   a = psi / pi,

whose inverse on the segment gives ``w(t) = h^{-1}(t) / theta``.  For the flat
case ``psi = pi/2`` the map degenerates to the identity and ``w(t) = t/theta``.

Two derived constants appear throughout: ``phi = pi / (2 psi)`` and
``c_psi = (2/pi) (psi / sin psi)^phi``, which give the closed-form minorant
``w(t) >= c_psi (t/theta)^phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoConvergenceError
from .specfun import BetaArgs, beta_inc

__all__ = [
    "StripGeometry",
    "angle_constants",
    "boundary_map_h",
    "w_real",
    "w_lower_bound",
]

DEFAULT_TOL_FACTOR = 1e-12
MAX_ROOT_ITERATIONS = 200
HALF_PI = math.pi / 2.0


def angle_constants(psi: float) -> tuple[float, float]:
    """Exponent and coefficient of the power-law minorant of the weight.

    Parameters
    ----------
    psi : float
        Analyticity half-angle in (0, pi/2].

    Returns
    -------
    (phi, c_psi) : tuple of float
        ``phi = pi / (2 psi)`` and ``c_psi = (2/pi) (psi / sin psi)^phi``.
        At ``psi = pi/2`` this is exactly ``(1, 1)``.
    """
    if not (0.0 < psi <= HALF_PI):
        raise ValueError(f"half-angle psi must lie in (0, pi/2], got {psi}")
    phi = math.pi / (2.0 * psi)
    c_psi = (2.0 / math.pi) * (psi / math.sin(psi)) ** phi
    return phi, c_psi


@dataclass(frozen=True)
class StripGeometry:
    """Geometry of the interpolation problem: time horizon and sector angle.

    Attributes
    ----------
    theta : float
        Length of the real segment (the final observation time), positive.
    psi : float
        Analyticity half-angle in (0, pi/2].
    """

    theta: float
    psi: float

    def __post_init__(self) -> None:
        if not (self.theta > 0.0 and math.isfinite(self.theta)):
            raise ValueError(f"horizon theta must be positive and finite, got {self.theta}")
        if not (0.0 < self.psi <= HALF_PI):
            raise ValueError(f"half-angle psi must lie in (0, pi/2], got {self.psi}")

    @property
    def phi(self) -> float:
        """Power-law exponent pi / (2 psi)."""
        return math.pi / (2.0 * self.psi)

    @property
    def c_psi(self) -> float:
        """Coefficient of the power-law minorant."""
        return (2.0 / math.pi) * (self.psi / math.sin(self.psi)) ** self.phi


def boundary_map_h(x: float, geom: StripGeometry) -> float:
    """Boundary trace of the strip-to-half-plane map on the real segment.

    ``h`` is a strictly increasing bijection of ``[0, theta]`` onto itself,
    built from the incomplete Beta integral with exponents
    ``(psi/pi, 1 - psi/pi)``.  For ``psi = pi/2`` it reduces to the identity.

    Parameters
    ----------
    x : float
        Point of the segment, ``0 <= x <= theta``.
    geom : StripGeometry
        Segment length and sector half-angle.
    """
    theta, psi = geom.theta, geom.psi
    if not (0.0 <= x <= theta):
        raise ValueError(f"x must lie in [0, {theta}], got {x}")
    if x == 0.0:
        return 0.0
    s = math.sin(HALF_PI * x / theta) ** 2
    a = psi / math.pi
    return theta * math.sin(psi) / math.pi * beta_inc(BetaArgs(a=a, x=min(s, 1.0)))


def w_real(t: float, geom: StripGeometry, tol: float | None = None) -> float:
    """Harmonic interpolation weight at time ``t``.

    Solves ``h(x) = t`` on ``(0, theta]`` with a bracketed bisection iteration
    refined by secant steps and returns ``w = x / theta``.  The solve stops
    once the bracket width and the map residual are both below ``tol``.

    Parameters
    ----------
    t : float
        Time in ``(0, theta]``.
    geom : StripGeometry
        Segment length and sector half-angle.
    tol : float, optional
        Absolute tolerance on the root (and on the residual in the same
        units).  Defaults to ``1e-12 * theta``.

    Returns
    -------
    float
        Weight in ``(0, 1]``, monotone in ``t``, with
        ``w(theta) = 1`` and ``w(t) >= w_lower_bound(t)``.

    Raises
    ------
    NoConvergenceError
        If the iteration budget is exhausted before both stopping criteria
        are met.
    """
    theta = geom.theta
    if not (0.0 < t <= theta):
        raise ValueError(f"t must lie in (0, theta={theta}], got {t}")
    if tol is None:
        tol = DEFAULT_TOL_FACTOR * theta
    if not (tol > 0.0):
        raise ValueError(f"tolerance must be positive, got {tol}")
    if t >= theta * (1.0 - 1e-15):
        return 1.0

    lo, f_lo = 0.0, -t
    hi, f_hi = theta, theta - t
    # seed the secant memory with the endpoints
    x_prev, f_prev = lo, f_lo
    x_curr, f_curr = hi, f_hi
    for _ in range(MAX_ROOT_ITERATIONS):
        # secant proposal, midpoint fallback whenever it is useless
        denom = f_curr - f_prev
        if denom != 0.0:
            cand = x_curr - f_curr * (x_curr - x_prev) / denom
        else:
            cand = math.nan
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        f_cand = boundary_map_h(cand, geom) - t
        x_prev, f_prev = x_curr, f_curr
        x_curr, f_curr = cand, f_cand
        if f_cand < 0.0:
            lo, f_lo = cand, f_cand
        else:
            hi, f_hi = cand, f_cand
        if hi - lo <= tol and abs(f_cand) <= tol:
            return x_curr / theta
    raise NoConvergenceError(
        f"weight solve for t={t} did not converge in {MAX_ROOT_ITERATIONS} iterations"
    )


def w_lower_bound(t: float, geom: StripGeometry) -> float:
    """Closed-form power-law minorant ``c_psi (t/theta)^phi`` of the weight."""
    if not (0.0 < t <= geom.theta):
        raise ValueError(f"t must lie in (0, theta={geom.theta}], got {t}")
    return geom.c_psi * (t / geom.theta) ** geom.phi
