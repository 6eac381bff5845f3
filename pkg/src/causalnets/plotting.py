"""PNG figures rendered next to the TSV plot data."""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

PARAMS = {
    "font.size": 8,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.0,
    "figure.dpi": 150,
    "savefig.bbox": "tight",
}
# no timestamps or version strings in the files
_META = {"Software": None}


def _save(fig, path: str) -> str:
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def plot_diamond(window, dec, path: str) -> str:
    """Cylinder, caps and causal complement on the window grid."""
    from .geometry import causal_complement

    codes = np.zeros(window.shape)
    codes[causal_complement(dec.cylinder).mask] = 1
    codes[dec.caps_r.mask] = 2
    codes[dec.caps_t.mask] = 3
    codes[dec.cylinder.mask] = 4
    cmap = matplotlib.colors.ListedColormap(["white", "#c6dbef", "#fdae6b", "#74c476", "#6a51a3"])
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots(figsize=(3.4, 3.4))
        ax.imshow(codes, origin="lower", cmap=cmap, vmin=-0.5, vmax=4.5, interpolation="nearest",
                  extent=(-window.x_max, window.x_max, -window.t_max, window.t_max))
        handles = [matplotlib.patches.Patch(color=cmap(i), label=lab) for i, lab in
                   [(1, "C'"), (2, "C_r"), (3, "C_t"), (4, "C")]]
        ax.legend(handles=handles, loc="upper right", frameon=False)
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        return _save(fig, path)


def plot_pauli_jordan(table, mono, path: str) -> str:
    with plt.rc_context(PARAMS):
        fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(6.8, 2.6))
        for i, t in enumerate(table.times):
            if t == 0:
                continue
            vals = np.abs(table.values[i])
            ax0.semilogy(table.sites, np.maximum(vals, 1e-18), label=f"t = {t:g}")
        ax0.set_xlabel("site n")
        ax0.set_ylabel("|Delta(t, n)|")
        ax0.legend(frameon=False)
        ns = [n for n, _, _ in mono]
        ax1.loglog(ns, [r.suppression for _, _, r in mono], "o-")
        ax1.set_xlabel("N (fixed N a)")
        ax1.set_ylabel("inside / outside max")
        return _save(fig, path)


def plot_fermi(setup, curves, path: str) -> str:
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots(figsize=(3.4, 2.4))
        t = np.arange(curves.shape[1])
        for c in curves[:5]:
            ax.plot(t, c, "o-", ms=2, alpha=0.8)
        ax.axvline(setup.R, color="k", ls="--", lw=0.8)
        ax.set_xlabel("layer t")
        ax.set_ylabel("trace distance at atom a")
        return _save(fig, path)


def render(result, out_dir: str) -> list[str]:
    """Figures for whichever plot data a suite result carries."""
    paths = []
    data = result.plot_data
    if "diamond" in data:
        paths.append(plot_diamond(*data["diamond"], os.path.join(out_dir, "diamond_cells.png")))
    if "pauli_jordan" in data:
        paths.append(plot_pauli_jordan(*data["pauli_jordan"], os.path.join(out_dir, "pauli_jordan.png")))
    if "fermi" in data:
        paths.append(plot_fermi(*data["fermi"], os.path.join(out_dir, "fermi_deviation.png")))
    return paths
