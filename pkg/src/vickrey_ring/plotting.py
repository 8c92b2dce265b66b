"""Figures for benchmark output (headless)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import BenchRow, series  # noqa: E402


def plot_bench(rows: list[BenchRow], path) -> Path:
    """Main-auction time against ``k`` and keygen time against ``n``."""
    path = Path(path)
    fig, (ax_k, ax_n) = plt.subplots(1, 2, figsize=(10, 4))
    for n in sorted({r.n for r in rows}):
        x, y = series(rows, "price", "k", n=n)
        if len(x) > 1:
            ax_k.plot(x, y, "o-", label=f"n={n}")
    ax_k.set_xlabel("k (bits per bid)")
    ax_k.set_ylabel("per-bidder seconds")
    ax_k.set_title("price determination")
    for k in sorted({r.k for r in rows}):
        x, y = series(rows, "keygen", "n", k=k)
        if len(x) > 1:
            ax_n.plot(x, y, "s-", label=f"k={k}")
    ax_n.set_xlabel("n (bidders)")
    ax_n.set_ylabel("per-bidder seconds")
    ax_n.set_title("key generation")
    for ax in (ax_k, ax_n):
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize="small")
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
