"""Figure rendering for the report path (PNG files next to the CSVs)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["render_sweep", "render_monodromy", "render_schur_scan",
           "render_diagnostics"]

plt.rcParams["figure.dpi"] = 120
plt.rcParams["font.size"] = 9
plt.rcParams["axes.grid"] = True
plt.rcParams["grid.alpha"] = 0.3


def _save(fig, path):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_sweep(sweep, path: str) -> None:
    """Log-log coalescence and Gaudin singular values along the sweep."""
    ok = sweep.converged
    d = sweep.deltas[ok]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    ax1.loglog(d, sweep.separations[ok], "o-", ms=3,
               label=f"separation (slope {sweep.separation_exponent:.3f})")
    ax1.loglog(d, np.sqrt(d) * sweep.separations[ok][0] / np.sqrt(d[0]),
               "k--", lw=0.8, label="slope 1/2 guide")
    ax1.set_xlabel(r"control distance $\delta$")
    ax1.set_ylabel("pair separation")
    ax1.legend(fontsize=7)
    ax2.loglog(d, sweep.sigma_min[ok], "o-", ms=3,
               label=f"$\\sigma_N$ (slope {sweep.sigma_min_exponent:.3f})")
    ax2.loglog(d, sweep.sigma_rest_min[ok], "s-", ms=3, label=r"$\sigma_{N-1}$")
    ax2.set_xlabel(r"control distance $\delta$")
    ax2.set_ylabel("Gaudin singular values")
    ax2.legend(fontsize=7)
    _save(fig, path)


def render_monodromy(trace, path: str) -> None:
    """Root trajectories in the complex rapidity plane."""
    fig, ax = plt.subplots(figsize=(4.4, 3.6))
    traj = trace.trajectories
    for j in range(traj.shape[1]):
        ax.plot(traj[:, j].real, traj[:, j].imag, "-", lw=0.9)
        ax.plot(traj[0, j].real, traj[0, j].imag, "ko", ms=4, mfc="none")
        ax.plot(traj[-1, j].real, traj[-1, j].imag, "rx", ms=4)
    ax.set_xlabel("Re k")
    ax.set_ylabel("Im k")
    ax.set_title(f"loop permutation {trace.permutation}, "
                 f"parity {trace.parity}", fontsize=8)
    _save(fig, path)


def render_schur_scan(phis, beta_eff, eps_eff, g0, gaps, errors,
                      path: str) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    ax1.plot(phis, beta_eff / g0, "o", ms=3, label=r"$\beta_{eff}/G_0$")
    ax1.plot(phis, np.sin(2 * phis), "k--", lw=0.8, label=r"$\sin 2\phi$")
    ax1.plot(phis, eps_eff / g0, "s", ms=3, label=r"$-\Delta\epsilon/G_0$")
    ax1.plot(phis, np.cos(2 * phis), "k:", lw=0.8, label=r"$\cos 2\phi$")
    ax1.set_xlabel(r"drive phase $\phi$")
    ax1.legend(fontsize=7)
    ax2.loglog(gaps, errors, "o-", ms=3)
    ax2.set_xlabel(r"auxiliary gap $\Delta_O$")
    ax2.set_ylabel("coarse-graining error")
    _save(fig, path)


def render_diagnostics(rows: dict, path: str) -> None:
    """Pseudospectrum and resolvent scaling fits for each regime."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    for label, data in rows.items():
        eps = np.array([e for e, _ in data["pseudospectrum_pairs"]])
        rad = np.array([r for _, r in data["pseudospectrum_pairs"]])
        ax1.loglog(eps, rad, "o-", ms=3,
                   label=f"{label} (slope {data['pseudospectrum_exponent']:.2f})")
        dist = np.array(data["resolvent_distances"])
        nrm = np.array(data["resolvent_norms"])
        ax2.loglog(dist, nrm, "o-", ms=3,
                   label=f"{label} (order {data['resolvent_pole_order']:.2f})")
    ax1.set_xlabel(r"$\epsilon$")
    ax1.set_ylabel("pseudospectrum radius")
    ax1.legend(fontsize=7)
    ax2.set_xlabel(r"$|z - E_+|$")
    ax2.set_ylabel(r"$\|(z-H)^{-1}\|$")
    ax2.legend(fontsize=7)
    _save(fig, path)
