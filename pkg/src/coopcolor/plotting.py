"""Figures for benchmark tables. Rendered to files with the Agg backend."""
from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 11,
    "legend.fontsize": 9,
    "lines.linewidth": 1.5,
    "lines.markersize": 5,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def figure(width: float = 6.0, height: float | None = None, ncols: int = 1):
    golden = (math.sqrt(5) - 1.0) / 2.0
    if height is None:
        height = width * golden / ncols * 1.4 if ncols > 1 else width * golden
    with plt.rc_context(RC):
        fig, axes = plt.subplots(1, ncols, figsize=(width, height), squeeze=False)
    return fig, axes[0]


def save(fig, path: str | Path) -> Path:
    path = Path(path)
    with plt.rc_context(RC):
        fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_lll_table(rows: Sequence[dict], path: str | Path) -> Path:
    """Success rate and median resamples against max degree d (k = ceil(2ed))."""
    rows = sorted(rows, key=lambda r: r["d"])
    ds = [r["d"] for r in rows]
    fig, (ax1, ax2) = figure(ncols=2, width=8)
    ax1.plot(ds, [r["success_rate"] for r in rows], "o-", color="tab:blue")
    ax1.set_xscale("log", base=2)
    ax1.set_ylim(-0.05, 1.05)
    ax1.set_xlabel("max degree d")
    ax1.set_ylabel("success rate")
    ax2.plot(ds, [r["median_resamples"] for r in rows], "s-", color="tab:red")
    ax2.set_xscale("log", base=2)
    ax2.set_xlabel("max degree d")
    ax2.set_ylabel("median resamples")
    fig.suptitle("Moser-Tardos resampling at k = ceil(2ed)")
    return save(fig, path)


def plot_scaling_table(rows: Sequence[dict], path: str | Path) -> Path:
    """Success rate and heavy-vertex fraction against memberships per vertex, one line per d."""
    by_d: dict[int, list[dict]] = defaultdict(list)
    for r in rows:
        by_d[r["d"]].append(r)
    fig, (ax1, ax2) = figure(ncols=2, width=8)
    for d in sorted(by_d):
        rs = sorted(by_d[d], key=lambda r: r["ell"])
        ells = [r["ell"] for r in rs]
        ax1.plot(ells, [r["success_rate"] for r in rs], "o-", label=f"d = {d}")
        ax2.plot(ells, [r["mean_heavy_fraction"] for r in rs], "s--", label=f"d = {d}")
    ax1.set_ylim(-0.05, 1.05)
    ax1.set_xlabel("memberships per vertex")
    ax1.set_ylabel("success rate")
    ax2.set_xlabel("memberships per vertex")
    ax2.set_ylabel("heavy vertex fraction")
    ax1.legend(frameon=False)
    fig.suptitle("Star partition procedure")
    return save(fig, path)
