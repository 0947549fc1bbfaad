"""Figures for benchmark results (written to files, never shown)."""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def bench_figure(rows, path):
    """Two panels: wall time against n, and makespan / lower bound against n."""
    by_algo = defaultdict(list)
    for r in rows:
        by_algo[r["algo"]].append((int(r["n"]), float(r["wall_time"]), float(r["ratio_vs_lb"])))
    fig, (ax_t, ax_r) = plt.subplots(1, 2, figsize=(10, 4))
    for algo, pts in sorted(by_algo.items()):
        pts.sort()
        ns = [p[0] for p in pts]
        ax_t.plot(ns, [p[1] for p in pts], "o-", label=algo)
        ax_r.plot(ns, [p[2] for p in pts], "o", label=algo)
    ax_t.set_xscale("log")
    ax_t.set_yscale("log")
    ax_t.set_xlabel("jobs n")
    ax_t.set_ylabel("wall time [s]")
    ax_r.set_xscale("log")
    ax_r.set_xlabel("jobs n")
    ax_r.set_ylabel("makespan / lower bound")
    ax_r.axhline(2.0, color="grey", lw=0.8, ls="--")
    for ax in (ax_t, ax_r):
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
