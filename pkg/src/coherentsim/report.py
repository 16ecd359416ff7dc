"""Figure rendering for experiment CSVs.

Each experiment kind has a matplotlib renderer; `render` dispatches on the
record kind and writes a PNG next to the delimited output (or to an explicit
path).  Sweeps are drawn against the matched-entropy axis with solid lines
for continuous noise and dashed for Pauli, mirroring how the two families
are compared; heatmaps show the mean and variance of the infidelity ratio.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import ResultRecord

_MODEL_STYLE = {"continuous": "-", "pauli": "--"}


def _series(records, **match):
    out = [
        r
        for r in records
        if all(getattr(r, k) == v for k, v in match.items())
    ]
    return sorted(out, key=lambda r: r.entropy)


def plot_qec_sweep(records: list[ResultRecord]):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    combos = sorted({(r.m, r.ec) for r in records})
    models = sorted({r.model for r in records})
    colors = plt.cm.viridis(np.linspace(0.0, 0.85, len(combos)))
    for color, (m, ec) in zip(colors, combos):
        for model in models:
            series = _series(records, m=m, ec=ec, model=model)
            if not series:
                continue
            xs = [r.entropy for r in series]
            ys = [r.p_err for r in series]
            errs = [r.stderr for r in series]
            ax.errorbar(
                xs,
                ys,
                yerr=errs,
                color=color,
                linestyle=_MODEL_STYLE.get(model, "-"),
                marker="o",
                markersize=3,
                label=f"m={m}, ec={ec}, {model}",
            )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("matched binary entropy H")
    ax.set_ylabel(r"logical error probability $p_{\mathrm{err}}$")
    code = records[0].code if records else ""
    ax.set_title(f"[[{code[0]},{code[1]},{code[2]}]] code" if len(code) == 3 else code)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig


def plot_grover_sweep(records: list[ResultRecord]):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ns = sorted({r.N for r in records})
    models = sorted({r.model for r in records})
    colors = plt.cm.plasma(np.linspace(0.0, 0.85, len(ns)))
    for color, n in zip(colors, ns):
        for model in models:
            series = _series(records, N=n, model=model)
            if not series:
                continue
            ax.errorbar(
                [r.entropy for r in series],
                [r.gsa_err for r in series],
                yerr=[r.stderr for r in series],
                color=color,
                linestyle=_MODEL_STYLE.get(model, "-"),
                marker="o",
                markersize=3,
                label=f"N={n}, {model}",
            )
    ax.set_xscale("log")
    ax.set_xlabel("matched binary entropy H")
    ax.set_ylabel(r"error probability $p^{\mathrm{GSA}}_{\mathrm{err}}$")
    ax.set_title("Grover search under matched noise")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig


def plot_clifford_heatmap(records: list[ResultRecord]):
    hs = sorted({r.n_h for r in records})
    cs = sorted({r.n_cnot for r in records})
    mean = np.full((len(cs), len(hs)), np.nan)
    var = np.full((len(cs), len(hs)), np.nan)
    for r in records:
        mean[cs.index(r.n_cnot), hs.index(r.n_h)] = r.mean_ratio
        var[cs.index(r.n_cnot), hs.index(r.n_h)] = r.var_ratio
    fig, axes = plt.subplots(1, 2, figsize=(10.0, 4.2))
    for ax, data, label in ((axes[0], mean, "mean ratio"), (axes[1], var, "ratio variance")):
        im = ax.imshow(data, origin="lower", aspect="auto", cmap="viridis")
        ax.set_xticks(range(len(hs)), [str(v) for v in hs])
        ax.set_yticks(range(len(cs)), [str(v) for v in cs])
        ax.set_xlabel("Hadamard count")
        ax.set_ylabel("CNOT count")
        ax.set_title(label)
        fig.colorbar(im, ax=ax)
    sigma = records[0].sigma if records else float("nan")
    fig.suptitle(f"approximation vs full model, sigma = {sigma:g}")
    fig.tight_layout()
    return fig


def plot_entropy_table(records: list[ResultRecord]):
    records = sorted(records, key=lambda r: r.p)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.2))
    ps = [r.p for r in records]
    ax1.plot(ps, [r.entropy for r in records], "-o", markersize=3)
    ax1.set_xscale("log")
    ax1.set_yscale("log")
    ax1.set_xlabel("Pauli rate p")
    ax1.set_ylabel("binary entropy H")
    ax2.plot(ps, [r.sigma for r in records], "-o", markersize=3, label=r"$\sigma$")
    ax2.plot(ps, [1.0 / np.sqrt(r.kappa) for r in records], ":", label=r"$\kappa^{-1/2}$")
    ax2.set_xscale("log")
    ax2.set_yscale("log")
    ax2.set_xlabel("Pauli rate p")
    ax2.set_ylabel("matched continuous width")
    ax2.legend()
    fig.tight_layout()
    return fig


_PLOTTERS = {
    "qec_sweep": plot_qec_sweep,
    "grover_sweep": plot_grover_sweep,
    "clifford_heatmap": plot_clifford_heatmap,
    "entropy_table": plot_entropy_table,
}


def figure_path_for(csv_path: str) -> str:
    return os.path.splitext(csv_path)[0] + ".png"


def render(records: list[ResultRecord], out_path: str) -> str:
    """Render the figure for a record list and save it as PNG."""
    if not records:
        raise ValueError("no records to plot")
    fig = _PLOTTERS[records[0].kind](records)
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    return out_path
