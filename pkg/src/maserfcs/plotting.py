"""Render sweep and histogram datasets to PNG files next to their CSV output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .sweep import Histogram  # noqa: E402

KIND_STYLE = {
    "q1": dict(color="tab:red", linestyle=":", label="quantum I"),
    "q2": dict(color="tab:blue", linestyle=":", label="quantum II"),
    "c1": dict(color="tab:red", linestyle="-", label="classical I"),
    "c2": dict(color="tab:blue", linestyle="-", label="classical II"),
}


def plot_sweep(rows: list[dict], axis: str, quantities: tuple[str, ...], path) -> None:
    """One panel per requested quantity, one curve per model variant."""
    quantities = tuple(quantities) or ("Q",)
    fig, axes = plt.subplots(1, len(quantities), figsize=(4.2 * len(quantities), 3.4), squeeze=False)
    kinds = sorted({row["kind"] for row in rows})
    log_axis = all(row["axis_value"] > 0 for row in rows)
    for ax, quantity in zip(axes[0], quantities):
        for kind in kinds:
            pts = [(row["axis_value"], row[quantity]) for row in rows
                   if row["kind"] == kind and row[quantity] is not None]
            if not pts:
                continue
            xs, ys = zip(*pts)
            ax.plot(xs, ys, **KIND_STYLE.get(kind, {}))
        if log_axis:
            ax.set_xscale("log")
        if quantity == "Q":
            ax.axhline(1.0, color="0.6", linewidth=0.8)
        ax.set_xlabel(axis)
        ax.set_ylabel(quantity)
    axes[0][0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_histogram(hist: Histogram, path) -> None:
    """Counts per Q bin, with an inset zooming on the violation region (Q > 1)."""
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    if hist.counts:
        lefts = hist.bin_edges[:-1]
        ax.bar(lefts, hist.counts, width=hist.bin_width, align="edge",
               color="tab:blue", edgecolor="none")
    ax.axvline(1.0, color="0.4", linewidth=0.8)
    ax.set_xlabel("Q")
    ax.set_ylabel("count")
    ax.set_title(f"model {hist.model.value}: {hist.n_violations} violations / {hist.n_samples} samples")
    if hist.n_violations and hist.counts:
        inset = ax.inset_axes([0.55, 0.45, 0.4, 0.45])
        tail = [(left, c) for left, c in zip(hist.bin_edges[:-1], hist.counts) if left + hist.bin_width > 1.0]
        if tail:
            xs, ys = zip(*tail)
            inset.bar(xs, ys, width=hist.bin_width, align="edge", color="tab:red", edgecolor="none")
            inset.set_xlim(1.0, max(hist.max_q * 1.02, 1.0 + 2 * hist.bin_width))
        inset.tick_params(labelsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
