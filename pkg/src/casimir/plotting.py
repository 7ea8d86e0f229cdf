"""Figure rendering for CLI reports.  matplotlib is imported lazily and only
with the Agg backend, so headless use never needs a display."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_xi_curve(kappas, values, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    vals = np.asarray(values)
    ax.plot(kappas, vals, "o-", ms=3, lw=1)
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(r"$\Xi(i\kappa)$")
    if np.all(vals < 0):
        ax2 = ax.twinx()
        ax2.semilogy(kappas, -vals, "r--", lw=0.8, alpha=0.6)
        ax2.set_ylabel(r"$-\Xi$ (log scale)", color="r")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(offsets, energies, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(offsets, energies, "o-", ms=4, lw=1)
    ax.set_xlabel("offset")
    ax.set_ylabel(r"$E_{\mathrm{rel}}$")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_tensor_field_1d(x, t00, t11, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(x, t00, label=r"$T_{00}$", lw=1.2)
    ax.plot(x, t11, "--", label=r"$T_{11}$", lw=1.2)
    ax.set_xlabel("x")
    ax.set_ylabel("energy density / pressure")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_tensor_field_2d(x, y, t00, config, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.5, 5.0))
    pc = ax.pcolormesh(x, y, t00, shading="auto", cmap="RdBu_r")
    fig.colorbar(pc, ax=ax, label=r"$T_{00}$")
    t = np.linspace(0, 2 * np.pi, 257)
    for curve in config.obstacles:
        pts = curve.point(t)
        ax.fill(pts[:, 0], pts[:, 1], color="0.85", ec="k", lw=1.0, zorder=3)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
