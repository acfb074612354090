"""Static figures for the report-style CLI commands."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_settings():
    plt.rcParams["lines.linewidth"] = 1.5
    plt.rcParams["font.size"] = 10
    plt.rcParams["axes.labelsize"] = 11
    plt.rcParams["legend.fontsize"] = 9
    plt.rcParams["savefig.dpi"] = 150


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def crossing_figure(report, path) -> Path:
    """Polarization and threshold curves on a log scale, crossing marked."""
    plot_settings()
    rows = report.rows
    n = np.array([r["n"] for r in rows])
    eps = np.array([r["polarization"] for r in rows])
    thr = np.array([r["threshold"] for r in rows])
    extra = np.array([r["extrapolated"] for r in rows])

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(n, eps, "o-", label="achievable polarization")
    ax.semilogy(n[~extra], thr[~extra], "s-", color="C1", label="threshold (numeric)")
    if extra.any():
        ax.semilogy(n[extra], thr[extra], "s--", color="C1", mfc="none", label="threshold (analytic)")
    if report.n_cross is not None:
        ax.axvline(report.n_cross, color="0.5", ls=":", label=f"crossing n = {report.n_cross}")
    ax.set_xlabel("qubits n")
    ax.set_ylabel("epsilon")
    ax.legend()
    return _save(fig, path)


def threshold_figure(table, path) -> Path:
    plot_settings()
    n = np.array([t[0] for t in table])
    eps_c = np.array([t[1] for t in table])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(n, eps_c, "o", label="bisection")
    grid = np.linspace(n.min(), n.max(), 200)
    ax.semilogy(grid, 1 / (1 + 2 ** (grid - 1)), "-", lw=1, label="1/(1+2^(n-1))")
    ax.set_xlabel("qubits n")
    ax.set_ylabel("PPT threshold")
    ax.legend()
    return _save(fig, path)


def mq_figure(sig, path) -> Path:
    """Signal versus rotation phase, and its order spectrum."""
    plot_settings()
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 5))
    top.plot(sig.phi, sig.signal, ".-")
    top.set_xlabel("phi (rad)")
    top.set_ylabel("signal")
    order = np.argsort(sig.orders)
    bottom.stem(sig.orders[order], sig.amplitudes[order])
    bottom.set_xlabel("coherence order p")
    bottom.set_ylabel("|FFT|")
    bottom.set_title(f"n = {sig.n}, peak at p = {sig.peak_order}")
    return _save(fig, path)
