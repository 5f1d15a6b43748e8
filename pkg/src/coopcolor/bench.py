"""Benchmark suites: solver/instance matrices reduced to CSV + JSON tables and figures.

Result tables depend only on the suite and seed list. Wall times go to a
separate ``*_timings.csv`` so the tables themselves are byte-reproducible.
"""
from __future__ import annotations

import csv
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .solvers import SolverParams, lll_solve, sample_random_star_family, star_partition_solve


@dataclass(frozen=True)
class Cell:
    suite: str
    params: tuple[tuple[str, int], ...]

    def get(self, key: str) -> int:
        return dict(self.params)[key]


def _lll_cells(n: int | None) -> list[Cell]:
    n = n or 200
    return [Cell("lll-2ed", (("n", n), ("d", d), ("k", math.ceil(2 * math.e * d))))
            for d in (4, 8, 16)]


def _scaling_cells(n: int | None) -> list[Cell]:
    n = n or 10 ** 4
    return [Cell("star-partition-scaling", (("n", n), ("d", d), ("ell", ell)))
            for d in (100, 1000) for ell in range(2, 17)]


def _run_lll(cell: Cell, seed: int) -> dict:
    fam = sample_random_star_family(cell.get("n"), cell.get("k"), cell.get("d"), seed)
    out = lll_solve(fam, SolverParams(seed=seed))
    return {"sat": out.is_sat, "resamples": out.stats["resamples"], "wall_time": out.stats["wall_time"]}


def _run_scaling(cell: Cell, seed: int) -> dict:
    n = cell.get("n")
    fam = sample_random_star_family(n, cell.get("ell"), cell.get("d"), seed)
    out = star_partition_solve(fam, SolverParams(seed=seed, resample_cap=10 ** 5))
    return {"sat": out.is_sat, "resamples": out.stats["resamples"],
            "heavy_fraction": out.stats["heavy"] / n, "wall_time": out.stats["wall_time"]}


SUITES: dict[str, tuple[Callable[[int | None], list[Cell]], Callable[[Cell, int], dict]]] = {
    "lll-2ed": (_lll_cells, _run_lll),
    "star-partition-scaling": (_scaling_cells, _run_scaling),
}


def _task(args):
    suite, cell, seed = args
    return SUITES[suite][1](cell, seed)


def parse_seeds(text: str) -> list[int]:
    """'0-9', '1,5,7' or a mix like '0-3,10'."""
    seeds: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def run_suite(suite: str, seeds: Sequence[int], jobs: int = 1, n: int | None = None) -> tuple[list[dict], list[dict]]:
    """Returns (table rows, timing rows)."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    if not seeds:
        raise ValueError("the seed list is empty")
    cells = SUITES[suite][0](n)
    tasks = [(suite, c, s) for c in cells for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_task(t) for t in tasks]
    rows, timings = [], []
    for ci, cell in enumerate(cells):
        res = results[ci * len(seeds):(ci + 1) * len(seeds)]
        row = dict(cell.params)
        row["seeds"] = len(seeds)
        row["successes"] = sum(r["sat"] for r in res)
        row["success_rate"] = row["successes"] / len(seeds)
        row["median_resamples"] = statistics.median(r["resamples"] for r in res)
        if "heavy_fraction" in res[0]:
            row["mean_heavy_fraction"] = round(statistics.fmean(r["heavy_fraction"] for r in res), 6)
        rows.append(row)
        t = dict(cell.params)
        t["median_wall_time"] = statistics.median(r["wall_time"] for r in res)
        t["total_wall_time"] = sum(r["wall_time"] for r in res)
        timings.append(t)
    return rows, timings


def _write_csv(path: Path, rows: list[dict]):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def write_report(suite: str, rows: list[dict], timings: list[dict], out_dir: str | Path,
                 seeds: Sequence[int], plot: bool = True) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = suite.replace("-", "_")
    paths = [out_dir / f"{stem}.csv", out_dir / f"{stem}.json", out_dir / f"{stem}_timings.csv"]
    _write_csv(paths[0], rows)
    paths[1].write_text(json.dumps({"suite": suite, "seeds": list(seeds), "rows": rows}, indent=1) + "\n",
                        encoding="utf-8")
    _write_csv(paths[2], timings)
    if plot:
        from . import plotting
        fig_path = out_dir / f"{stem}.png"
        if suite == "lll-2ed":
            plotting.plot_lll_table(rows, fig_path)
        else:
            plotting.plot_scaling_table(rows, fig_path)
        paths.append(fig_path)
    return paths


def cmd_bench(suite: str, seeds: Sequence[int], output: str | Path, jobs: int = 1,
              n: int | None = None, plot: bool = True) -> dict:
    t0 = time.perf_counter()
    rows, timings = run_suite(suite, seeds, jobs, n)
    paths = write_report(suite, rows, timings, output, seeds, plot)
    return {"suite": suite, "cells": len(rows), "rows": rows,
            "artifacts": [str(p) for p in paths], "wall_time": time.perf_counter() - t0}
