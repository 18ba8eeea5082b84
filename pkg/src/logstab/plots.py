"""Figure rendering for experiment reports and the weight map.

Everything draws through the Agg backend and writes PNG files, so the CLI
report path works on headless machines.  Each function returns the path it
wrote.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

__all__ = ["render_wmap", "render_logconvexity", "render_stability"]


def render_wmap(t, w, lower, path) -> Path:
    """Harmonic weight and its power-law lower bound against time."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(t, w, label="w(t)", color="tab:blue")
    ax.plot(t, lower, label="lower bound", color="tab:orange", linestyle="--")
    ax.set_xlabel("t")
    ax.set_ylabel("weight")
    ax.set_title("Harmonic weight on the strip")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_logconvexity(report, path) -> Path:
    """Trajectory norms against their interpolation bounds, log scale.

    Draws every sample's actual norm (thin) and bound (dashed) over the time
    grid, plus a ratio histogram inset summarizing how much slack the bound
    keeps.
    """
    path = Path(path)
    idx = {name: k for k, name in enumerate(report.columns)}
    rows = np.array(
        [[r[idx["sample_id"]], r[idx["t"]], r[idx["actual"]], r[idx["bound"]]]
         for r in report.rows]
    )
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.0))
    for sid in np.unique(rows[:, 0]):
        block = rows[rows[:, 0] == sid]
        order = np.argsort(block[:, 1])
        ax1.semilogy(block[order, 1], block[order, 2], color="tab:blue", alpha=0.15, lw=0.8)
        ax1.semilogy(block[order, 1], block[order, 3], color="tab:red", alpha=0.15, lw=0.8,
                     linestyle="--")
    ax1.set_xlabel("t")
    ax1.set_ylabel("norm")
    ax1.set_title("Trajectories (blue) vs bounds (red, dashed)")
    ax1.grid(True, alpha=0.3)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = rows[:, 3] / rows[:, 2]
    ratios = ratios[np.isfinite(ratios)]
    if ratios.size:
        ax2.hist(np.log10(ratios), bins=40, color="tab:green", alpha=0.8)
    ax2.set_xlabel("log10(bound / actual)")
    ax2.set_ylabel("records")
    ax2.set_title("Bound slack distribution")
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_stability(report, path) -> Path:
    """Observation norm against initial norm with the kernel envelope."""
    path = Path(path)
    idx = {name: k for k, name in enumerate(report.columns)}
    rows = np.array(
        [[r[idx["init_norm"]], r[idx["obs_norm"]], r[idx["kernel"]], r[idx["ratio"]]]
         for r in report.rows]
    )
    valid = np.isfinite(rows[:, 2])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.0))
    ax1.loglog(rows[valid, 1], rows[valid, 0], ".", ms=4, alpha=0.6, color="tab:blue",
               label="samples")
    if valid.any():
        power = report.summary["s"] / report.summary["p"]
        k1 = report.summary["empirical_K1"]
        order = np.argsort(rows[valid, 1])
        obs_sorted = rows[valid, 1][order]
        env = k1 * rows[valid, 2][order] ** power
        ax1.loglog(obs_sorted, env, color="tab:red", lw=1.5,
                   label="K1 * kernel^(s/p)")
    ax1.set_xlabel("observation norm")
    ax1.set_ylabel("initial norm")
    ax1.set_title("Conditional stability envelope")
    ax1.legend()
    ax1.grid(True, alpha=0.3)

    envelope = report.summary.get("envelope_K1", [])
    amplitudes = report.summary.get("amplitudes", [])
    if envelope and amplitudes:
        ax2.semilogx(amplitudes, envelope, "o-", color="tab:purple")
        ax2.set_xlabel("amplitude")
        ax2.set_ylabel("envelope K1")
        ax2.set_title("Envelope constant across the sweep")
        ax2.invert_xaxis()
        ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
