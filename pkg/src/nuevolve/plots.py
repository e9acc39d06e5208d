"""Figure rendering for the command-line report path.

Each command saves one PNG next to its delimited output.  Figures are
diagnostic companions to the CSV/JSON data, never a data channel of their
own, and rendering failures must not affect exit codes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_flow_figure(ts, phi, varphi, theta0, abs_q, abs_y, abs_im_w, path):
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.plot(ts, phi, label=r"$\phi$")
    ax1.plot(ts, varphi, label=r"$\varphi$")
    ax1.plot(ts, theta0, label=r"$\vartheta_0$")
    ax1.set_ylabel("flow variables")
    ax1.legend(loc="best", fontsize=9)
    resid = np.maximum.reduce([np.asarray(abs_q), np.asarray(abs_y), np.asarray(abs_im_w)])
    floor = 1e-18
    ax2.semilogy(ts, np.maximum(abs_q, floor), label=r"$|Q|$")
    ax2.semilogy(ts, np.maximum(abs_y, floor), label=r"$|Y|$")
    ax2.semilogy(ts, np.maximum(abs_im_w, floor), label=r"$|\mathrm{Im}\,W|$")
    ax2.semilogy(ts, np.maximum(resid, floor), "k--", lw=0.8, label="worst")
    ax2.set_xlabel("t")
    ax2.set_ylabel("constraint residuals")
    ax2.legend(loc="best", fontsize=9)
    _finish(fig, path)


def save_evolve_figure(ts, per_index, path):
    """per_index: {index: (amplitude_moduli array [nt, dim], metric_norm array [nt])}"""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for n, (mods, _) in per_index.items():
        ax1.plot(ts, mods.max(axis=1), label=f"n={n}")
    ax1.set_ylabel("max |amplitude|")
    ax1.legend(loc="best", fontsize=9)
    for n, (_, mnorm) in per_index.items():
        m0 = mnorm[0] if mnorm[0] != 0 else 1.0
        ax2.plot(ts, mnorm / m0, label=f"n={n}")
    ax2.set_xlabel("t")
    ax2.set_ylabel("metric norm / initial")
    ax2.legend(loc="best", fontsize=9)
    _finish(fig, path)


def save_spectrum_figure(eigenvalues, trusted, path):
    eigenvalues = np.asarray(eigenvalues)
    trusted = np.asarray(trusted, dtype=bool)
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(
        eigenvalues.real[trusted], eigenvalues.imag[trusted], s=18, label="trusted"
    )
    if np.any(~trusted):
        ax.scatter(
            eigenvalues.real[~trusted],
            eigenvalues.imag[~trusted],
            s=12,
            marker="x",
            alpha=0.5,
            label="cutoff artifacts",
        )
    ax.set_xlabel("Re eigenvalue")
    ax.set_ylabel("Im eigenvalue")
    ax.legend(loc="best", fontsize=9)
    _finish(fig, path)


def save_decompose_figure(eps, mu_mod, residual, path):
    fig, ax = plt.subplots(figsize=(6, 5))
    vals = np.maximum(np.asarray(residual), 1e-18)
    sc = ax.scatter(eps, mu_mod, c=np.log10(vals), s=16, cmap="viridis")
    fig.colorbar(sc, ax=ax, label="log10 identity residual")
    ax.set_xlabel(r"$\varepsilon$")
    ax.set_ylabel(r"$|\mu|$")
    _finish(fig, path)


def save_verify_figure(ts, per_index_errors, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    floor = 1e-18
    for n, errs in per_index_errors.items():
        ax.semilogy(ts, np.maximum(errs, floor), marker="o", ms=3, label=f"n={n}")
    ax.set_xlabel("t")
    ax.set_ylabel("closed form vs oracle error")
    ax.legend(loc="best", fontsize=9)
    _finish(fig, path)
