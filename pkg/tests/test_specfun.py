"""Tests for the incomplete Gamma and Beta routines.

Frozen reference values were generated offline with mpmath at 50 significant
digits from the defining integrals (hypergeometric evaluation cross-checked
against tanh-sinh quadrature), independent of the code under test.  Runtime
oracles use QUADPACK adaptive quadrature — with algebraic-singularity weights
where an endpoint is singular — and the scipy.special implementations.
"""

import math

import numpy as np
import pytest
from scipy import integrate, special

from logstab.specfun import (
    BetaArgs,
    GammaArgs,
    beta_inc,
    beta_lower_residual,
    gamma_lower_ratio,
    gamma_upper,
)


def rel_err(got: float, want: float) -> float:
    return abs(got - want) / abs(want)


# ---------------------------------------------------------------------------
# upper incomplete Gamma


GAMMA_UPPER_FROZEN = [
    (0.5, 0.3, 0.7773593112498081),
    (0.2, 2.0, 0.05961938265498282),
    (2.5, 7.0, 0.020750227257978492),
    (0.2, 0.0, 4.590843711998803),
    (0.9, 40.0, 2.9305969951104794e-18),
    (3.0, 0.5, 1.9712246440660586),
    (1.0, 2.0, 0.1353352832366127),
]


@pytest.mark.parametrize("a,x,expected", GAMMA_UPPER_FROZEN)
def test_gamma_upper_frozen_values(a, x, expected):
    assert rel_err(gamma_upper(GammaArgs(a=a, x=x)), expected) <= 1e-12


def test_gamma_upper_closed_forms():
    # Gamma(1, x) = e^-x and Gamma(a, 0) = Gamma(a)
    for x in [0.0, 0.5, 1.0, 2.0, 10.0, 50.0]:
        assert rel_err(gamma_upper(GammaArgs(a=1.0, x=x)), math.exp(-x)) <= 1e-13
    for a in [0.05, 0.3, 0.5, 1.7, 4.0, 9.5]:
        assert rel_err(gamma_upper(GammaArgs(a=a, x=0.0)), math.gamma(a)) <= 1e-13
    assert rel_err(gamma_upper(GammaArgs(a=0.5, x=0.0)), math.sqrt(math.pi)) <= 1e-13


def test_gamma_upper_matches_scipy_on_grid():
    # independent implementation: regularized Q(a, x) scaled back by Gamma(a)
    for a in np.geomspace(0.05, 10.0, 12):
        for x in [0.0, 0.2, 1.0, 3.7, 10.0, 50.0]:
            want = special.gammaincc(a, x) * special.gamma(a)
            assert rel_err(gamma_upper(GammaArgs(a=float(a), x=x)), want) <= 1e-12


@pytest.mark.parametrize(
    "a,x",
    [(0.3, 0.05), (0.5, 1.0), (1.5, 0.4), (2.5, 7.0), (4.0, 2.0), (7.5, 20.0)],
)
def test_gamma_upper_quadrature_oracle(a, x):
    # adaptive quadrature of the defining integrand on [x, inf), x > 0
    oracle, err = integrate.quad(
        lambda t: t ** (a - 1.0) * math.exp(-t), x, np.inf, epsabs=1e-14, epsrel=1e-13
    )
    assert err < 1e-10 * oracle
    assert rel_err(gamma_upper(GammaArgs(a=a, x=x)), oracle) <= 1e-9


def test_gamma_upper_recurrence():
    # Gamma(a+1, x) = a Gamma(a, x) + x^a e^-x, both branches of the split
    for a in [0.2, 0.5, 1.3, 3.0, 6.5]:
        for x in [0.1, 0.9, a + 0.5, a + 5.0, 30.0]:
            lhs = gamma_upper(GammaArgs(a=a + 1.0, x=x))
            rhs = a * gamma_upper(GammaArgs(a=a, x=x)) + x**a * math.exp(-x)
            assert rel_err(lhs, rhs) <= 1e-12


def test_gamma_upper_derivative_identity():
    # d/dx Gamma(a, x) = -x^(a-1) e^-x, central differences at 1e-6 relative
    for a in [0.3, 0.8, 1.5, 3.0]:
        for x in [0.2, 0.7, 2.0, 6.0]:
            h = 1e-5 * max(1.0, x)
            fd = (
                gamma_upper(GammaArgs(a=a, x=x + h)) - gamma_upper(GammaArgs(a=a, x=x - h))
            ) / (2.0 * h)
            exact = -(x ** (a - 1.0)) * math.exp(-x)
            assert rel_err(fd, exact) <= 1e-6


def test_gamma_upper_monotone_decreasing_in_x():
    for a in [0.4, 1.0, 2.7]:
        values = [gamma_upper(GammaArgs(a=a, x=x)) for x in np.linspace(0.0, 12.0, 40)]
        assert np.all(np.diff(values) < 0.0)


@pytest.mark.parametrize("a,x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.1), (math.inf, 1.0), (math.nan, 1.0), (1.0, math.nan)])
def test_gamma_args_rejected(a, x):
    with pytest.raises(ValueError):
        GammaArgs(a=a, x=x)


# ---------------------------------------------------------------------------
# lower incomplete Gamma ratio  a * gamma_lower(a, x) / x^a


def test_gamma_lower_ratio_matches_scipy():
    for a in [0.33, 0.5, 1.0, 2.7]:
        for x in [1e-8, 0.1, 1.0, 5.0, 40.0]:
            want = a * special.gammainc(a, x) * special.gamma(a) / x**a
            assert rel_err(gamma_lower_ratio(a, x), want) <= 1e-12


def test_gamma_lower_ratio_limits():
    # the ratio tends to 1 as x -> 0+ and decays toward 0 as x grows
    assert abs(gamma_lower_ratio(0.5, 1e-14) - 1.0) <= 1e-12
    values = [gamma_lower_ratio(0.5, x) for x in [0.1, 1.0, 10.0, 100.0, 600.0]]
    assert np.all(np.diff(values) < 0.0)
    # for large x the lower integral saturates at Gamma(a): ratio ~ a Gamma(a) / x^a
    tail = 0.5 * math.gamma(0.5) / math.sqrt(600.0)
    assert rel_err(values[-1], tail) <= 1e-12


# ---------------------------------------------------------------------------
# incomplete Beta with conjugate exponents (a, 1 - a)


BETA_INC_FROZEN = [
    (0.3, 0.4, 2.61560342594798),
    (0.7, 0.25, 0.5866046676878274),
    (0.45, 0.97, 2.9149097116110503),
    (0.2, 0.85, 5.054745827287299),
    (0.5, 0.5, 1.5707963267948966),
    (0.25, 1.0, 4.442882938158366),
]


@pytest.mark.parametrize("a,x,expected", BETA_INC_FROZEN)
def test_beta_inc_frozen_values(a, x, expected):
    assert rel_err(beta_inc(BetaArgs(a=a, x=x)), expected) <= 1e-12


def test_beta_inc_endpoints():
    for a in [0.1, 0.25, 0.5, 0.8, 0.95]:
        assert beta_inc(BetaArgs(a=a, x=0.0)) == 0.0
        full = beta_inc(BetaArgs(a=a, x=1.0))
        assert rel_err(full, math.pi / math.sin(math.pi * a)) <= 1e-12


def test_beta_inc_half_exponent_closed_form():
    # B_x(1/2, 1/2) = 2 arcsin(sqrt x)
    for x in np.linspace(0.02, 1.0, 25):
        want = 2.0 * math.asin(math.sqrt(x))
        assert rel_err(beta_inc(BetaArgs(a=0.5, x=float(x))), want) <= 1e-12


def test_beta_inc_matches_scipy_on_grid():
    for a in [0.1, 0.25, 0.5, 0.7, 0.9]:
        for x in [0.01, 0.3, 0.5, 0.77, 0.99]:
            want = special.betainc(a, 1.0 - a, x) * special.beta(a, 1.0 - a)
            assert rel_err(beta_inc(BetaArgs(a=a, x=x)), want) <= 1e-12


@pytest.mark.parametrize("a,x", [(0.2, 0.35), (0.35, 0.8), (0.5, 0.6), (0.75, 0.45), (0.9, 0.2)])
def test_beta_inc_weighted_quadrature_oracle(a, x):
    # QUADPACK algebraic weight t^(a-1) carries the left singularity; the
    # remaining factor (1-t)^-a is smooth on [0, x] for x < 1
    oracle, err = integrate.quad(
        lambda t: (1.0 - t) ** (-a),
        0.0,
        x,
        weight="alg",
        wvar=(a - 1.0, 0.0),
        epsabs=1e-13,
        epsrel=1e-12,
    )
    assert err < 1e-10 * oracle
    assert rel_err(beta_inc(BetaArgs(a=a, x=x)), oracle) <= 1e-9


@pytest.mark.parametrize("a", [0.2, 0.45, 0.5, 0.65, 0.9])
def test_beta_inc_full_range_weighted_quadrature_oracle(a):
    # both endpoints singular at x = 1: weight t^(a-1) (1-t)^-a, unit factor
    oracle, err = integrate.quad(
        lambda t: 1.0,
        0.0,
        1.0,
        weight="alg",
        wvar=(a - 1.0, -a),
        epsabs=1e-13,
        epsrel=1e-12,
    )
    assert err < 1e-10 * oracle
    assert rel_err(beta_inc(BetaArgs(a=a, x=1.0)), oracle) <= 1e-9


def test_beta_inc_strictly_increasing_in_x():
    for a in [0.15, 0.5, 0.85]:
        values = [beta_inc(BetaArgs(a=a, x=float(x))) for x in np.linspace(0.0, 1.0, 60)]
        assert np.all(np.diff(values) > 0.0)


def test_beta_reflection_identity_grid():
    # B_1(a, 1-a) sin(pi a) = pi on 50 exponents
    for a in np.linspace(0.02, 0.98, 50):
        full = beta_inc(BetaArgs(a=float(a), x=1.0))
        assert abs(full * math.sin(math.pi * a) - math.pi) <= 1e-10


def test_beta_partial_reflection_consistency():
    # B_x(a, 1-a) + B_(1-x)(1-a, a) = B_1(a, 1-a), exercising both halves
    for a in [0.2, 0.35, 0.5, 0.8]:
        for x in [0.1, 0.3, 0.45]:
            total = beta_inc(BetaArgs(a=a, x=x)) + beta_inc(BetaArgs(a=1.0 - a, x=1.0 - x))
            assert rel_err(total, math.pi / math.sin(math.pi * a)) <= 1e-12


def test_beta_derivative_identity():
    # d/dx B_x(a, 1-a) = x^(a-1) (1-x)^-a, central differences
    for a in [0.2, 0.5, 0.8]:
        for x in [0.1, 0.3, 0.6, 0.9]:
            h = 1e-6
            fd = (beta_inc(BetaArgs(a=a, x=x + h)) - beta_inc(BetaArgs(a=a, x=x - h))) / (
                2.0 * h
            )
            exact = x ** (a - 1.0) * (1.0 - x) ** (-a)
            assert rel_err(fd, exact) <= 1e-6


@pytest.mark.parametrize("a,x", [(0.0, 0.5), (1.0, 0.5), (-0.5, 0.5), (1.5, 0.5), (0.5, -0.1), (0.5, 1.1)])
def test_beta_args_rejected(a, x):
    with pytest.raises(ValueError):
        BetaArgs(a=a, x=x)


# ---------------------------------------------------------------------------
# arcsine lower-bound residual


def test_beta_lower_residual_frozen_values():
    assert rel_err(beta_lower_residual(BetaArgs(a=0.25, x=0.5)), 0.08157482394246272) <= 1e-11
    # at x = 1 the comparison term vanishes, leaving a * B_1(a, 1-a)
    want = 0.25 * math.pi / math.sin(math.pi / 4.0)
    assert rel_err(beta_lower_residual(BetaArgs(a=0.25, x=1.0)), want) <= 1e-12


def test_beta_lower_residual_nonnegative_grid():
    # 50 x 50 grid over (0, 1/2] x (0, 1]
    grid_a = np.linspace(0.01, 0.5, 50)
    grid_x = np.linspace(0.02, 1.0, 50)
    worst = min(
        beta_lower_residual(BetaArgs(a=float(a), x=float(x)))
        for a in grid_a
        for x in grid_x
    )
    assert worst >= -1e-10


def test_beta_lower_residual_vanishes_at_half():
    for x in np.linspace(0.05, 1.0, 20):
        assert abs(beta_lower_residual(BetaArgs(a=0.5, x=float(x)))) <= 1e-12


def test_beta_lower_residual_rejects_out_of_scope():
    with pytest.raises(ValueError):
        beta_lower_residual(BetaArgs(a=0.6, x=0.5))
    with pytest.raises(ValueError):
        beta_lower_residual(BetaArgs(a=0.25, x=0.0))
