"""Command-line interface.

Subcommands
-----------
wmap
    Tabulate the harmonic weight, its power-law lower bound, and the
    boundary time map on a grid; CSV to stdout or a file, optional figure.
angle
    Read a drift matrix (JSON ``{"n": int, "rows": [[...]]}``, optional
    ``q_rows``) and print the analyticity angle, its asymmetry measure, and
    the steady-state covariance.
simulate
    Evaluate the Kolmogorov semigroup on a named test function at a point.
bounds
    Print the stability kernel and both bound forms for one observation norm.
observability
    Estimate the discrete observability constants for a config file.
experiment
    Run a logconvexity or stability experiment; write CSV records, a JSON
    summary, and rendered figures into an output directory.
verify
    Run the fast invariant battery; exit nonzero if any check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

__all__ = ["main", "build_parser"]


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _read_matrix_file(path) -> tuple[np.ndarray, np.ndarray | None]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "n" not in data or "rows" not in data:
        raise SystemExit(f"matrix file {path} must have keys 'n' and 'rows'")
    n = int(data["n"])
    B = np.asarray(data["rows"], dtype=float)
    if B.shape != (n, n):
        raise SystemExit(f"matrix file {path}: rows shape {B.shape} != ({n}, {n})")
    Q = None
    if data.get("q_rows") is not None:
        Q = np.asarray(data["q_rows"], dtype=float)
        if Q.shape != (n, n):
            raise SystemExit(f"matrix file {path}: q_rows shape {Q.shape} != ({n}, {n})")
    return B, Q


def _cmd_wmap(args) -> int:
    from .conformal import StripGeometry, boundary_map_h, w_lower_bound, w_real

    geom = StripGeometry(theta=args.theta, psi=args.psi)
    ts = args.theta * np.arange(1, args.grid + 1) / args.grid
    lines = ["t,w,lower_bound,h"]
    ws, lows = [], []
    for t in ts:
        w = w_real(float(t), geom)
        low = w_lower_bound(float(t), geom)
        h = boundary_map_h(float(t), geom)
        ws.append(w)
        lows.append(low)
        lines.append(f"{_fmt(t)},{_fmt(w)},{_fmt(low)},{_fmt(h)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    if args.fig:
        from .plots import render_wmap

        render_wmap(ts, ws, lows, args.fig)
        print(f"wrote {args.fig}")
    return 0


def _cmd_angle(args) -> int:
    from .operators import DriftSpec, angle_details

    B, Q = _read_matrix_file(args.drift)
    if args.diffusion:
        Q, _ = _read_matrix_file(args.diffusion)
    psi, gamma, q_inf = angle_details(DriftSpec(B=B, Q=Q))
    payload = {
        "psi": psi,
        "gamma": gamma,
        "q_inf": [[float(v) for v in row] for row in q_inf],
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_simulate(args) -> int:
    from .semigroup import TEST_FUNCTIONS, OUModel

    B, Q = _read_matrix_file(args.drift)
    if args.f not in TEST_FUNCTIONS:
        raise SystemExit(
            f"unknown test function {args.f!r}; choose from {sorted(TEST_FUNCTIONS)}"
        )
    f = TEST_FUNCTIONS[args.f]
    model = OUModel.from_drift(B, Q=Q, quadrature_order=args.quad_order)
    x = np.asarray([float(v) for v in args.x.split(",")], dtype=float)
    if x.size != model.dim:
        raise SystemExit(f"point has {x.size} coordinates, model needs {model.dim}")
    times = [float(v) for v in args.t.split(",")]
    print("t,value")
    from .semigroup import kolmogorov_apply

    for t in times:
        value = kolmogorov_apply(model, t, f, x[None, :])[0]
        print(f"{_fmt(t)},{_fmt(value)}")
    return 0


def _cmd_bounds(args) -> int:
    from .conformal import StripGeometry
    from .stability import StabilityParams, stability_rhs, validate_params

    geom = StripGeometry(theta=args.theta, psi=args.psi)
    params = StabilityParams(
        theta=args.theta, eps=args.eps, M=args.M, p=args.p, s=args.s
    )
    violations = validate_params(params)
    if violations:
        payload = {
            "kernel": None,
            "exact": None,
            "simplified": None,
            "phi": geom.phi,
            "c": geom.c_psi * args.p,
            "violations": violations,
        }
        print(json.dumps(payload, indent=2))
        return 1
    bound = stability_rhs(args.obs, params, geom, K1=1.0)
    payload = {
        "kernel": bound.kernel,
        "exact": bound.exact,
        "simplified": bound.simplified,
        "phi": bound.phi,
        "c": bound.c,
        "violations": violations,
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_observability(args) -> int:
    from .harness import build_generator, build_region, estimate_observability, load_config

    config = load_config(args.config)
    gen = build_generator(config.generator)
    region = build_region(config.region)
    theta = float(config.geometry["theta"])
    n_times = args.n_times or int(config.time_grid.get("n_times", 64))
    est = estimate_observability(gen, region, theta, n_times)
    payload = {
        "kappa_obs": est.kappa_obs,
        "kappa_adm": est.kappa_adm,
        "conditioning": est.conditioning,
        "cover_warning": est.cover_warning,
        "theta": theta,
        "n_times": n_times,
        "config_hash": config.config_hash,
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_experiment(args) -> int:
    from .harness import load_config, run_experiment

    config = load_config(args.config)
    report = run_experiment(args.mode, config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = report.write_csv(out_dir / "records.csv")
    json_path = report.write_json(out_dir / "summary.json")
    written = [str(csv_path), str(json_path)]
    if not args.no_figures:
        if args.mode == "logconvexity":
            from .plots import render_logconvexity

            written.append(str(render_logconvexity(report, out_dir / "logconvexity.png")))
        else:
            from .plots import render_stability

            written.append(str(render_stability(report, out_dir / "stability.png")))
    payload = dict(report.summary)
    payload["config_hash"] = report.config_hash
    payload["seed"] = report.seed
    payload["mode"] = report.mode
    payload["written"] = written
    print(json.dumps(payload, indent=2, sort_keys=True, default=float))
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_all

    results = run_all()
    failures = 0
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        failures += 0 if res.ok else 1
        print(f"{status}  {res.name}: {res.detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logstab",
        description="Logarithmic-convexity stability bounds for semigroup flows",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wmap", help="tabulate the harmonic weight on the strip")
    p.add_argument("--psi", type=float, required=True, help="strip half-angle in radians")
    p.add_argument("--theta", type=float, default=1.0, help="final time")
    p.add_argument("--grid", type=int, default=100, help="number of grid points")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--fig", help="optional PNG figure path")
    p.set_defaults(func=_cmd_wmap)

    p = sub.add_parser("angle", help="analyticity angle of a drift matrix")
    p.add_argument("--drift", required=True, help="JSON matrix file {n, rows}")
    p.add_argument("--diffusion", help="optional JSON matrix file for the diffusion")
    p.set_defaults(func=_cmd_angle)

    p = sub.add_parser("simulate", help="Kolmogorov semigroup on a test function")
    p.add_argument("--drift", required=True, help="JSON matrix file {n, rows}")
    p.add_argument("--t", required=True, help="comma-separated times")
    p.add_argument("--f", required=True, help="named test function")
    p.add_argument("--x", required=True, help="comma-separated evaluation point")
    p.add_argument("--quad-order", type=int, default=40, help="nodes per dimension")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("bounds", help="stability kernel and bound forms")
    p.add_argument("--psi", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--obs", type=float, required=True, help="observation norm in (0,1)")
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--M", type=float, default=1.0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("observability", help="discrete observability constants")
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--n-times", type=int, default=0, help="override time nodes")
    p.set_defaults(func=_cmd_observability)

    p = sub.add_parser("experiment", help="run an experiment and write a report")
    p.add_argument("--mode", choices=("logconvexity", "stability"), required=True)
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("verify", help="run the fast invariant battery")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
