"""Fast end-to-end invariant battery behind the ``verify`` CLI subcommand.

Each check is small enough to run in well under a second and covers one
load-bearing identity or contract of the library.  A check that raises
counts as failed with the exception text as its detail.  The battery is a
smoke layer, not the test suite: the pytest suite carries the full grids and
oracles; this battery re-runs the sharpest representatives so a deployed
install can be validated from the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .conformal import StripGeometry, w_lower_bound, w_real
from .errors import DegenerateObservationError
from .harness import (
    ExperimentConfig,
    ObservationRegion,
    estimate_observability,
    run_experiment,
)
from .operators import (
    DriftSpec,
    analyticity_angle,
    build_heat_generator,
    build_ou_generator,
    lyapunov_gramian,
    semigroup_apply,
)
from .semigroup import OUModel, finite_time_gramian, gramian_t, kolmogorov_apply
from .specfun import BetaArgs, GammaArgs, beta_inc, beta_lower_residual, gamma_upper
from .stability import StabilityParams, gamma_kernel, r_monotone_residuals, validate_params

__all__ = ["CheckResult", "run_all"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _check_gamma_closed_forms() -> tuple[bool, str]:
    errs = [
        abs(gamma_upper(GammaArgs(a=1.0, x=0.0)) - 1.0),
        abs(gamma_upper(GammaArgs(a=0.5, x=0.0)) - math.sqrt(math.pi)),
        abs(gamma_upper(GammaArgs(a=1.0, x=2.0)) - math.exp(-2.0)),
    ]
    worst = max(errs)
    return worst <= 1e-12, f"worst closed-form error {worst:.2e}"


def _check_reflection_identity() -> tuple[bool, str]:
    grid = np.linspace(0.03, 0.97, 21)
    worst = max(
        abs(beta_inc(BetaArgs(a=float(a), x=1.0)) * math.sin(math.pi * a) - math.pi)
        for a in grid
    )
    return worst <= 1e-10, f"worst reflection residual {worst:.2e}"


def _check_beta_inequality() -> tuple[bool, str]:
    worst = math.inf
    for a in np.linspace(0.05, 0.5, 10):
        for x in np.linspace(0.05, 1.0, 10):
            worst = min(worst, beta_lower_residual(BetaArgs(a=float(a), x=float(x))))
    return worst >= -1e-10, f"smallest inequality residual {worst:.2e}"


def _check_weight_dominance() -> tuple[bool, str]:
    geom = StripGeometry(theta=1.0, psi=math.pi / 4.0)
    ts = np.linspace(0.02, 1.0, 50)
    worst = min(w_real(float(t), geom) - w_lower_bound(float(t), geom) for t in ts)
    return worst >= -1e-9, f"smallest dominance margin {worst:.2e}"


def _check_weight_identity_right_angle() -> tuple[bool, str]:
    geom = StripGeometry(theta=2.0, psi=math.pi / 2.0)
    ts = np.linspace(0.05, 2.0, 40)
    worst = max(abs(w_real(float(t), geom) - t / 2.0) for t in ts)
    return worst <= 1e-10, f"max |w - t/theta| = {worst:.2e}"


def _check_angle_worked_example() -> tuple[bool, str]:
    psi = analyticity_angle(DriftSpec(B=np.array([[-1.0, 2.0], [0.0, -1.0]])))
    err = abs(psi - math.pi / 4.0)
    return err <= 1e-10, f"|psi - pi/4| = {err:.2e}"


def _check_gramian_worked_example() -> tuple[bool, str]:
    spec = DriftSpec(B=np.array([[-1.0, 2.0], [0.0, -1.0]]))
    q = lyapunov_gramian(spec).matrix
    target = np.array([[1.5, 0.5], [0.5, 0.5]])
    err = float(np.abs(q - target).max())
    res = float(np.linalg.norm(spec.B @ q + q @ spec.B.T + spec.Q))
    ok = err <= 1e-12 and res <= 1e-10
    return ok, f"worked-value error {err:.2e}, residual {res:.2e}"


def _check_heat_semigroup() -> tuple[bool, str]:
    gen = build_heat_generator(8, math.pi)
    rng = np.random.default_rng(0)
    u = rng.standard_normal(8)
    n0 = float(np.linalg.norm(u))
    decays = [float(np.linalg.norm(semigroup_apply(gen, t, u))) for t in (0.1, 0.5, 1.0)]
    contraction = all(b <= a + 1e-12 for a, b in zip([n0] + decays, decays))
    two_step = semigroup_apply(gen, 0.3, semigroup_apply(gen, 0.7, u))
    law = float(np.linalg.norm(semigroup_apply(gen, 1.0, u) - two_step))
    ok = contraction and law <= 1e-10 * n0
    return ok, f"contraction {contraction}, semigroup-law error {law:.2e}"


def _check_ou_generator_spectrum() -> tuple[bool, str]:
    gen = build_ou_generator(DriftSpec(B=np.array([[-0.7]])), order=6)
    e0 = np.zeros(gen.dim)
    e0[0] = 1.0
    const = float(np.linalg.norm(gen.A @ e0))
    eigs = np.sort(np.linalg.eigvals(gen.A).real)
    target = np.sort([-0.7 * k for k in range(7)])
    err = float(np.abs(eigs - target).max())
    ok = const <= 1e-12 and err <= 1e-8
    return ok, f"A e0 = {const:.2e}, spectrum error {err:.2e}"


def _check_kernel_quadrature() -> tuple[bool, str]:
    worst = 0.0
    for E, phi, c in ((0.3, 2.0, 1.0), (0.05, 1.5, 2.5), (0.9, 3.0, 0.5)):
        oracle, _ = quad(lambda t: E ** (c * t**phi), 0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
        worst = max(worst, abs(gamma_kernel(E, phi, c) - oracle))
    closed = abs(gamma_kernel(0.25, 1.0, 2.0) - (0.25**2 - 1.0) / (2.0 * math.log(0.25)))
    ok = worst <= 1e-9 and closed <= 1e-12
    return ok, f"quadrature error {worst:.2e}, closed-form error {closed:.2e}"


def _check_kernel_decay() -> tuple[bool, str]:
    values = [gamma_kernel(10.0**-k, 2.0, 1.0) for k in range(1, 13)]
    ok = all(b < a for a, b in zip(values, values[1:])) and values[-1] > 0.0
    return ok, f"kernel at E=1e-12: {values[-1]:.3e}"


def _check_r_monotone() -> tuple[bool, str]:
    grid = np.linspace(0.02, 0.45, 30)
    up = r_monotone_residuals(1.0, 2.0, 2.0, grid)
    down = r_monotone_residuals(1.0, 2.0, 0.5, np.linspace(0.02, 0.9, 30))
    flat = r_monotone_residuals(1.0, 2.0, 1.0, np.linspace(0.02, 0.9, 30))
    ok = (
        min(up) >= -1e-9
        and max(down) <= 1e-9
        and max(abs(v) for v in flat) == 0.0
    )
    return ok, f"min up {min(up):.2e}, max down {max(down):.2e}"


def _check_markov_property() -> tuple[bool, str]:
    model = OUModel.from_drift([[-0.5]])
    pts = np.array([[0.0], [0.7], [-1.3]])
    worst = 0.0
    for t in (0.1, 1.0, 5.0):
        vals = kolmogorov_apply(model, t, lambda x: np.ones(x.shape[0]), pts)
        worst = max(worst, float(np.abs(vals - 1.0).max()))
    linear = kolmogorov_apply(model, 0.8, lambda x: x[:, 0], pts)
    lin_err = float(np.abs(linear - math.exp(-0.4) * pts[:, 0]).max())
    ok = worst <= 1e-10 and lin_err <= 1e-10
    return ok, f"T(t)1 error {worst:.2e}, linear-mean error {lin_err:.2e}"


def _check_gramian_limit() -> tuple[bool, str]:
    model = OUModel.from_drift([[-1.0, 2.0], [0.0, -1.0]])
    tail = float(np.abs(gramian_t(model, 50.0).matrix - model.q_inf).max())
    rk = finite_time_gramian(model.spec, 1.0).matrix
    closed = gramian_t(model, 1.0).matrix
    split = float(np.abs(rk - closed).max())
    ok = tail <= 1e-10 and split <= 1e-8
    return ok, f"Q_50 vs Q_inf {tail:.2e}, RK4 vs closed form {split:.2e}"


def _check_observability_heat() -> tuple[bool, str]:
    gen = build_heat_generator(8, math.pi)
    est = estimate_observability(gen, ObservationRegion(kind="full"), 1.0, 16)
    ok = est.kappa_obs <= 1.0 + 1e-9
    detail = f"kappa_obs {est.kappa_obs:.6f} <= 1/sqrt(theta) = 1"
    try:
        estimate_observability(
            gen,
            ObservationRegion(kind="custom", mask=np.zeros(gen.basis.quad_order, dtype=bool)),
            1.0,
            8,
        )
        return False, "empty mask did not raise"
    except DegenerateObservationError:
        pass
    return ok, detail


def _check_param_validation() -> tuple[bool, str]:
    ok1 = validate_params(StabilityParams(theta=1.0, eps=0.5, M=1.0, p=1.5, s=0.2)) == []
    ok2 = validate_params(StabilityParams(theta=1.0, eps=0.5, M=1.0, p=2.5, s=0.2)) == ["p"]
    ok3 = validate_params(StabilityParams(theta=1.0, eps=0.5, M=1.0, p=1.5, s=0.5)) == ["s"]
    return ok1 and ok2 and ok3, f"cases: {ok1}, {ok2}, {ok3}"


def _check_tiny_experiment() -> tuple[bool, str]:
    config = ExperimentConfig.from_dict(
        {
            "generator": {"kind": "heat", "n_modes": 8, "length": math.pi},
            "region": {"kind": "full"},
            "geometry": {"theta": 1.0},
            "stability_params": {"eps": 0.5, "M": 1.0},
            "ensemble": {"count": 10, "seed": 3},
            "time_grid": {"n_times": 12},
        }
    )
    report = run_experiment("logconvexity", config)
    violations = report.summary["violations"]
    report.validate()
    return violations == 0, f"violations {violations}, max excess {report.summary['max_violation']:.2e}"


_CHECKS: tuple[tuple[str, Callable[[], tuple[bool, str]]], ...] = (
    ("gamma-closed-forms", _check_gamma_closed_forms),
    ("beta-reflection-identity", _check_reflection_identity),
    ("beta-lower-inequality", _check_beta_inequality),
    ("weight-dominates-power-law", _check_weight_dominance),
    ("weight-identity-right-angle", _check_weight_identity_right_angle),
    ("angle-worked-example", _check_angle_worked_example),
    ("gramian-worked-example", _check_gramian_worked_example),
    ("heat-semigroup-contraction", _check_heat_semigroup),
    ("ou-generator-spectrum", _check_ou_generator_spectrum),
    ("kernel-quadrature-identity", _check_kernel_quadrature),
    ("kernel-monotone-decay", _check_kernel_decay),
    ("ratio-function-monotonicity", _check_r_monotone),
    ("markov-normalization", _check_markov_property),
    ("gramian-limit-and-integrator", _check_gramian_limit),
    ("observability-heat-full", _check_observability_heat),
    ("parameter-validation", _check_param_validation),
    ("tiny-logconvexity-run", _check_tiny_experiment),
)


def run_all() -> list[CheckResult]:
    """Run every check, never raising; failures carry the exception text."""
    results = []
    for name, fn in _CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - battery must not abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name=name, ok=ok, detail=detail))
    return results
