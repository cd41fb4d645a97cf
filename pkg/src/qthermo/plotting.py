"""Figure rendering and plot-script emission for the report path.

Figures are rendered from the already-written CSV files so the PNGs and the
plot scripts always agree with the delimited output.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _load(path: str):
    return np.genfromtxt(path, delimiter=",", names=True)


def write_plot_script(path: str, csv_name: str, columns: list[tuple[int, str]],
                      xlabel: str, ylabel: str, title: str):
    """Plain-text gnuplot commands reproducing one figure from its CSV."""
    lines = [
        "# regeneratable plot script (gnuplot)",
        "set datafile separator ','",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        f"set title '{title}'",
        "set key outside",
    ]
    plots = [f"'{csv_name}' using 1:{idx} with lines title '{label}'"
             for idx, label in columns]
    lines.append("plot " + ", \\\n     ".join(plots))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def render_thermo_overview(out_dir: str, stem: str = "thermo"):
    """Heats, temperatures, and entropy from a simulate run."""
    data = _load(os.path.join(out_dir, f"{stem}.csv"))
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    t = data["t"]
    for key in ("Q_std", "Q_ent", "Q_ergo", "Q_op"):
        axes[0].plot(t, data[key], label=key)
    axes[0].set_xlabel("t")
    axes[0].set_ylabel("accumulated heat")
    axes[0].legend()
    for key in ("T_ergo", "T_conv", "T_ent"):
        axes[1].plot(t, data[key], label=key)
    axes[1].set_xlabel("t")
    axes[1].set_ylabel("temperature")
    axes[1].legend()
    axes[2].plot(t, data["S"], label="S")
    axes[2].plot(t, data["Sigma"], label="Sigma")
    axes[2].set_xlabel("t")
    axes[2].set_ylabel("entropy")
    axes[2].legend()
    fig.tight_layout()
    path = os.path.join(out_dir, f"{stem}.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_fig_gad(out_dir: str):
    data = _load(os.path.join(out_dir, "fig_gad.csv"))
    fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=False)
    for ax, tag, title in ((axes[0], "minus", "initial state (0.45, 0, -0.80)"),
                           (axes[1], "plus", "initial state (0.45, 0, +0.80)")):
        t = data["t"]
        ax.plot(t, data[f"T_ergo_{tag}"], label="ergotropy-based T")
        ax.plot(t, data[f"T_conv_{tag}"], label="conventional T")
        ax.plot(t, data[f"T_ent_{tag}"], label="entropy-based T")
        ax.plot(t, data["Te_ref"], "k--", label="environment Te")
        ax.set_xlabel("omega0 t")
        ax.set_ylabel("temperature (omega0 / k_B)")
        ax.set_title(title)
        ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(out_dir, "fig_gad.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_fig_pdm(out_dir: str):
    data = _load(os.path.join(out_dir, "fig_pdm.csv"))
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    t = data["t"]
    ax.plot(t, data["Q_ergo"], label="ergotropy-based heat")
    ax.plot(t, data["Q_op"], label="operational heat")
    ax.plot(t, data["Q_ent"], label="entropy-based heat")
    ax.plot(t, data["Q_std"], label="standard heat")
    ax.plot(t, data["dS_vn"], "--", label="entropy change")
    ax.plot(t, data["dS_clausius"], ":", label="integral of dQ/T")
    ax.set_xlabel("omega t")
    ax.set_ylabel("heat (omega0) / entropy (k_B)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(out_dir, "fig_pdm.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_fig_pdnm(out_dir: str):
    scan = _load(os.path.join(out_dir, "nm_scan.csv"))
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.plot(scan["s"], scan["N_Q"], "o-", ms=3, label="ergotropy-based measure")
    ax.plot(scan["s"], scan["N_ent"], "s-", ms=3, label="entropy-based measure")
    ax.plot(scan["s"], scan["N_std"], "^-", ms=3, label="standard measure")
    ax.set_xlabel("ohmicity parameter s")
    ax.set_ylabel("non-Markovianity (omega0)")
    ax.legend()
    fig.tight_layout()
    path = os.path.join(out_dir, "fig_pdnm.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)

    inset = _load(os.path.join(out_dir, "pdnm_inset.csv"))
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.plot(inset["tau"], inset["T_s2"], label="s = 2 (Markovian)")
    ax.plot(inset["tau"], inset["T_s32"], label="s = 3.2 (non-Markovian)")
    ax.set_xlabel("omega_c t")
    ax.set_ylabel("ergotropy-based temperature")
    ax.legend()
    fig.tight_layout()
    inset_path = os.path.join(out_dir, "fig_pdnm_inset.png")
    fig.savefig(inset_path, dpi=150)
    plt.close(fig)
    return path
