"""Tests for the interpolation bound, stability kernel, and parameter checks.

Frozen references were generated offline with 50-digit mpmath quadrature of
the kernel's defining integral over [0, 1].  The runtime oracle is a 200-node
Gauss-Legendre rule on the same integral, which is smooth for every tested
parameter combination.
"""

import math

import numpy as np
import pytest

from logstab.conformal import StripGeometry
from logstab.stability import (
    StabilityParams,
    gamma_kernel,
    logconvexity_bound,
    r_monotone_residuals,
    stability_rhs,
    validate_params,
)

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(200)
GL_T = 0.5 * (GL_NODES + 1.0)  # [0, 1]
GL_W = 0.5 * GL_WEIGHTS


def kernel_oracle(E: float, phi: float, c: float) -> float:
    """Gauss-Legendre quadrature of the defining integral of E^(c t^phi)."""
    return float(GL_W @ np.exp(c * GL_T**phi * math.log(E)))


def rel_err(got: float, want: float) -> float:
    return abs(got - want) / abs(want)


# ---------------------------------------------------------------------------
# gamma kernel


KERNEL_FROZEN = [
    (math.exp(-1.0), 2.0, 1.0, 0.746824132812427),
    (0.3, 2.5, 3.0, 0.5282036142321485),
    (1e-8, 1.5, 2.0, 0.08153450740368956),
    (0.9, 3.0, 0.5, 0.9870257526269373),
    (0.25, 1.0, 2.0, 0.3381316502083508),
]


@pytest.mark.parametrize("E,phi,c,expected", KERNEL_FROZEN)
def test_kernel_frozen_values(E, phi, c, expected):
    assert rel_err(gamma_kernel(E, phi, c), expected) <= 1e-12


def test_kernel_gaussian_integral_value():
    # phi=2, c=1, E=1/e: integral of exp(-t^2) over [0,1] = sqrt(pi)/2 erf(1)
    got = gamma_kernel(math.exp(-1.0), 2.0, 1.0)
    assert abs(got - 0.7468241) <= 5e-8
    assert rel_err(got, math.sqrt(math.pi) / 2.0 * math.erf(1.0)) <= 1e-12


def test_kernel_matches_quadrature_grid():
    # (E, phi, c) sweep across (0.01, 0.99) x [1, 3] x [0.5, 4]
    for E in [0.01, 0.03, 0.1, 0.3, 0.6, 0.9, 0.99]:
        for phi in [1.0, 1.5, 2.0, 3.0]:
            for c in [0.5, 1.0, 2.0, 4.0]:
                got = gamma_kernel(E, phi, c)
                assert abs(got - kernel_oracle(E, phi, c)) <= 1e-9


def test_kernel_unit_exponent_closed_form():
    # phi = 1: kernel = (E^c - 1) / (c log E)
    for E in [1e-10, 0.01, 0.25, 0.5, 0.9, 0.999]:
        for c in [0.5, 1.0, 2.0, 4.0]:
            want = (E**c - 1.0) / (c * math.log(E))
            assert rel_err(gamma_kernel(E, 1.0, c), want) <= 1e-12


def test_kernel_monotone_decay_to_zero():
    values = [gamma_kernel(10.0**-k, 2.0, 1.0) for k in range(1, 13)]
    assert np.all(np.diff(values) < 0.0)
    assert values[-1] < values[0] < 1.0


def test_kernel_extreme_underflow_safe():
    # observation norms down to 1e-300 stay finite and positive
    tiny = gamma_kernel(1e-300, 2.0, 1.5)
    assert 0.0 < tiny < 1e-1
    assert math.isfinite(tiny)


def test_kernel_limit_one():
    near = gamma_kernel(1.0 - 1e-12, 2.0, 1.0)
    assert 1.0 - 1e-9 <= near <= 1.0


def test_kernel_strictly_increasing_in_observation():
    for phi, c in [(1.0, 1.0), (2.0, 0.8), (3.0, 2.5)]:
        values = [gamma_kernel(float(E), phi, c) for E in np.geomspace(1e-6, 0.99, 40)]
        assert np.all(np.diff(values) > 0.0)


@pytest.mark.parametrize(
    "E,phi,c",
    [(0.0, 2.0, 1.0), (1.0, 2.0, 1.0), (-0.5, 2.0, 1.0), (1.5, 2.0, 1.0), (0.5, 0.5, 1.0), (0.5, 2.0, 0.0), (0.5, 2.0, -1.0)],
)
def test_kernel_rejects_bad_arguments(E, phi, c):
    with pytest.raises(ValueError):
        gamma_kernel(E, phi, c)


# ---------------------------------------------------------------------------
# log-convexity interpolation bound


def test_logconvexity_bound_endpoints():
    # exponents collapse to K * final_norm at (t, w) = (theta, 1) and to
    # K * M at (0, 0); the log-domain assembly is exact to one ulp
    got_final = logconvexity_bound(1.0, 1.0, 3.0, 0.2, K=1.5, kappa=0.0, theta=1.0)
    assert rel_err(got_final, 1.5 * 0.2) <= 1e-14
    got_initial = logconvexity_bound(0.0, 0.0, 3.0, 0.2, K=1.0, kappa=0.7, theta=1.0)
    assert rel_err(got_initial, 3.0) <= 1e-14
    # zero endpoint norms follow the 0^0 = 1 convention exactly
    assert logconvexity_bound(1.0, 1.0, 3.0, 0.0, theta=1.0) == 0.0
    assert logconvexity_bound(0.0, 0.0, 0.0, 0.2, theta=1.0) == 0.0


def test_logconvexity_bound_flat_weight_reduction():
    # K=1, kappa=0, w=t/theta: M^(1 - t/theta) F^(t/theta)
    M, F, theta = 2.0, 0.01, 2.0
    for t in np.linspace(0.0, theta, 15):
        w = t / theta
        got = logconvexity_bound(float(t), float(w), M, F, theta=theta)
        want = M ** (1.0 - w) * F**w
        assert rel_err(got, want) <= 1e-14


def test_logconvexity_bound_generic_recompute():
    t, w, M, F, K, kappa, theta = 0.6, 0.31, 1.7, 0.003, 1.2, 0.4, 1.5
    got = logconvexity_bound(t, w, M, F, K=K, kappa=kappa, theta=theta)
    want = K * math.exp(kappa * (t - theta * w)) * M ** (1.0 - w) * F**w
    assert rel_err(got, want) <= 1e-14


def test_logconvexity_bound_log_domain_underflow():
    got = logconvexity_bound(0.5, 0.5, 1.0, 1e-300, theta=1.0)
    assert got > 0.0
    assert rel_err(got, 1e-150) <= 1e-12


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(t=-0.1, w_t=0.0, M=1.0, final_norm=1.0),
        dict(t=1.5, w_t=0.5, M=1.0, final_norm=1.0),
        dict(t=0.5, w_t=-0.5, M=1.0, final_norm=1.0),
        dict(t=0.5, w_t=1.5, M=1.0, final_norm=1.0),
        dict(t=0.5, w_t=0.5, M=-1.0, final_norm=1.0),
        dict(t=0.5, w_t=0.5, M=1.0, final_norm=-1.0),
        dict(t=0.5, w_t=0.5, M=1.0, final_norm=1.0, K=0.5),
        dict(t=0.5, w_t=0.5, M=1.0, final_norm=1.0, kappa=-0.1),
        dict(t=0.5, w_t=0.5, M=1.0, final_norm=1.0, theta=0.0),
    ],
)
def test_logconvexity_bound_rejects_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        logconvexity_bound(**{"theta": 1.0, **kwargs})


# ---------------------------------------------------------------------------
# parameter validation


def test_validate_params_accepts_reference_bundle():
    params = StabilityParams(theta=1.0, eps=0.5, M=1.0, p=1.5, s=0.2)
    assert validate_params(params) == []


def test_validate_params_flags_interpolation_exponent():
    params = StabilityParams(theta=1.0, eps=0.5, M=1.0, p=2.5, s=0.2)
    assert validate_params(params) == ["p"]


def test_validate_params_flags_stability_exponent():
    params = StabilityParams(theta=1.0, eps=0.5, M=1.0, p=1.5, s=0.5)
    assert validate_params(params) == ["s"]


def test_validate_params_flags_plain_ranges():
    params = StabilityParams(theta=-1.0, eps=1.5, M=0.0, p=1.5, s=0.2, K=0.5, kappa=-1.0)
    bad = validate_params(params)
    for name in ("theta", "eps", "M", "K", "kappa"):
        assert name in bad
    params = StabilityParams(theta=1.0, eps=0.5, M=1.0, p=1.5, s=0.2, kappa_obs=-1.0, kappa_adm=0.0)
    assert validate_params(params) == ["kappa_obs", "kappa_adm"]


def test_validate_params_boundary_p_values():
    # endpoints of 1 < p < 1/(1-eps) are excluded
    for p in (1.0, 2.0):
        params = StabilityParams(theta=1.0, eps=0.5, M=1.0, p=p, s=0.2)
        assert "p" in validate_params(params)


def test_params_derived_quantities():
    params = StabilityParams(theta=2.0, eps=0.5, M=3.0, p=1.5, s=0.2, K=1.5, kappa=0.25)
    assert rel_err(params.k0, 1.5 * math.exp(0.5)) <= 1e-15
    assert params.kappa_m == 3.0


# ---------------------------------------------------------------------------
# reconstruction bound


def _reference_geometry():
    return StripGeometry(theta=1.0, psi=math.pi / 4.0)


def _reference_params(**overrides):
    base = dict(theta=1.0, eps=0.5, M=1.0, p=1.5, s=0.25)
    base.update(overrides)
    return StabilityParams(**base)


def test_stability_rhs_frozen_spot_value():
    bound = stability_rhs(1e-6, _reference_params(), _reference_geometry())
    assert rel_err(bound.kernel, 0.2196700737782837) <= 1e-12
    assert rel_err(bound.exact, 0.7767748384486871) <= 1e-12
    assert rel_err(bound.simplified, 0.7767748399510197) <= 1e-12
    assert bound.phi == 2.0
    assert rel_err(bound.c, 1.5 * math.pi / 4.0) <= 1e-14


def test_stability_rhs_kernel_quadrature_oracle():
    # two equivalent integral framings of the same bound
    params = _reference_params(s=0.2)
    geom = _reference_geometry()
    for obs in [1e-8, 1e-4, 0.03, 0.3]:
        bound = stability_rhs(obs, params, geom)
        direct = kernel_oracle(obs, geom.phi, geom.c_psi * params.p)
        powered = kernel_oracle(obs**params.p, geom.phi, geom.c_psi)
        assert abs(bound.kernel - direct) <= 1e-9
        assert abs(bound.kernel - powered) <= 1e-9
        assert rel_err(bound.exact, direct ** (params.s / params.p)) <= 1e-9


def test_stability_rhs_simplified_dominates_exact():
    geom = _reference_geometry()
    params = _reference_params()
    for obs in np.geomspace(1e-12, math.exp(-1.0), 30):
        bound = stability_rhs(float(obs), params, geom)
        assert bound.simplified >= bound.exact > 0.0


def test_stability_rhs_right_angle_reduction():
    # psi = pi/2: exact form collapses to ((obs^p - 1)/(p log obs))^(s/p)
    geom = StripGeometry(theta=1.0, psi=math.pi / 2.0)
    params = _reference_params(p=1.8, s=0.4)
    for obs in [1e-5, 0.01, 0.2]:
        bound = stability_rhs(obs, params, geom, K1=2.0)
        core = (obs**params.p - 1.0) / (params.p * math.log(obs))
        assert rel_err(bound.exact, 2.0 * core ** (params.s / params.p)) <= 1e-12


def test_stability_rhs_scales_linearly_in_envelope_constant():
    geom = _reference_geometry()
    params = _reference_params()
    one = stability_rhs(1e-3, params, geom, K1=1.0)
    five = stability_rhs(1e-3, params, geom, K1=5.0)
    assert rel_err(five.exact, 5.0 * one.exact) <= 1e-14
    assert rel_err(five.simplified, 5.0 * one.simplified) <= 1e-14


def test_stability_rhs_rejects_bad_inputs():
    geom = _reference_geometry()
    with pytest.raises(ValueError, match="p"):
        stability_rhs(0.5, _reference_params(p=2.5), geom)
    for obs in (0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            stability_rhs(obs, _reference_params(), geom)
    with pytest.raises(ValueError):
        stability_rhs(0.5, _reference_params(), geom, K1=0.0)


# ---------------------------------------------------------------------------
# kernel transfer ratio monotonicity


def _ratio_grid(sigma: float, n: int = 200) -> np.ndarray:
    upper = min(1.0, 1.0 / sigma)
    return np.linspace(upper * 1e-3, upper * (1.0 - 1e-9), n)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("phi", [1.0, 1.5, 2.0, 3.0])
def test_ratio_residual_signs(c, phi):
    assert np.all(r_monotone_residuals(c, phi, 2.0, _ratio_grid(2.0)) >= -1e-9)
    assert np.all(r_monotone_residuals(c, phi, 0.5, _ratio_grid(0.5)) <= 1e-9)
    assert np.all(r_monotone_residuals(c, phi, 1.0, _ratio_grid(1.0)) == 0.0)


def test_ratio_residuals_shape():
    grid = _ratio_grid(2.0, 17)
    res = r_monotone_residuals(1.0, 2.0, 2.0, grid)
    assert res.shape == (16,)


def test_ratio_residuals_reject_bad_grids():
    with pytest.raises(ValueError):
        r_monotone_residuals(1.0, 2.0, 0.0, _ratio_grid(1.0))
    with pytest.raises(ValueError):
        r_monotone_residuals(1.0, 2.0, 2.0, np.array([0.1]))
    with pytest.raises(ValueError):
        r_monotone_residuals(1.0, 2.0, 2.0, np.array([0.3, 0.2]))
    with pytest.raises(ValueError):
        r_monotone_residuals(1.0, 2.0, 2.0, np.array([0.1, 0.7]))
    with pytest.raises(ValueError):
        r_monotone_residuals(1.0, 2.0, 0.5, np.array([0.5, 1.2]))
