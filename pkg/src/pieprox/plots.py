"""Figure rendering for the CLI report paths.

Matplotlib is imported lazily and forced onto the Agg backend so figure
output works headless and costs nothing when unused.
"""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_sweep_figure(reports, path: str) -> None:
    """Success rate vs sparsity, one line per penalty."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    by_penalty: dict = {}
    for r in reports:
        by_penalty.setdefault(r.penalty, []).append((r.k, r.success_rate))
    for name, rows in by_penalty.items():
        rows.sort()
        ax.plot([k for k, _ in rows], [s for _, s in rows], marker="o", label=name)
    ax.set_xlabel("sparsity k")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.05, 1.05)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_threshold_figure(rows, path: str) -> None:
    """bar_tau and x_star against sigma, one panel per mu*lam group.

    rows: iterable of (mulambda, sigma, x_star, bar_tau).
    """
    plt = _pyplot()
    groups: dict = {}
    for mulam, sigma, x_star, bar_tau in rows:
        groups.setdefault(mulam, []).append((sigma, x_star, bar_tau))
    fig, axes = plt.subplots(1, max(len(groups), 1), figsize=(4.0 * max(len(groups), 1), 3.5))
    axes = np.atleast_1d(axes)
    for ax, (mulam, pts) in zip(axes, sorted(groups.items(), reverse=True)):
        pts.sort()
        sig = [s for s, _, _ in pts]
        ax.plot(sig, [x for _, x, _ in pts], marker="o", label="x_star")
        ax.plot(sig, [t for _, _, t in pts], marker="s", label="bar_tau")
        ax.set_title("mu*lam = %g" % mulam)
        ax.set_xlabel("sigma")
        ax.legend()
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_recover_figure(x_true, x_hat, path: str) -> None:
    """Stem-style overlay of the true and recovered signals."""
    plt = _pyplot()
    x_true = np.asarray(x_true, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    idx = np.arange(x_true.size)
    fig, ax = plt.subplots(figsize=(7.0, 3.5))
    ax.vlines(idx, 0.0, x_true, color="C0", alpha=0.6, label="true")
    ax.plot(idx, x_hat, ".", color="C3", markersize=4, label="recovered")
    ax.set_xlabel("index")
    ax.set_ylabel("amplitude")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
