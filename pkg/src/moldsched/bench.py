"""Benchmark suites: run a solver over generated instances and record a CSV."""

from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .generators import gen_random_monotone
from .model import fmt
from .solver import solve

COLUMNS = [
    "n", "m", "eps", "algo", "makespan", "lower_bound", "ratio_vs_lb", "wall_time",
    "family", "seed", "makespan_exact", "lower_bound_exact",
]

SUITES = {
    # (n, m, family) triples
    "smoke": [(n, m, fam) for n in (4, 8, 16) for m in (8, 32) for fam in ("power", "capped", "table")],
    "scaling": [(n, 2**40, "mixed") for n in (250, 500, 1000, 2000)],
    "shelves": [(n, 8 * n, fam) for n in (10, 20, 40, 80) for fam in ("power", "capped")],
}


def dec(x) -> str:
    return f"{float(x):.12g}"


def run_case(n, m, family, seed, algo, eps) -> dict:
    inst = gen_random_monotone(n, m, family, seed)
    t0 = time.perf_counter()
    sol = solve(inst, algo, eps)
    wall = time.perf_counter() - t0
    ratio = sol.makespan / sol.omega
    return {
        "n": n, "m": m, "eps": fmt(Fraction(eps)), "algo": sol.algo if algo == "auto" else algo,
        "makespan": dec(sol.makespan), "lower_bound": dec(sol.omega), "ratio_vs_lb": dec(ratio),
        "wall_time": f"{wall:.6f}", "family": family, "seed": seed,
        "makespan_exact": fmt(sol.makespan), "lower_bound_exact": fmt(sol.omega),
    }


def run_suite(cases, algo, eps, seed=0, threads=1) -> list:
    jobs = [(n, m, fam, seed + i, algo, eps) for i, (n, m, fam) in enumerate(cases)]
    if threads <= 1:
        return [run_case(*j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda j: run_case(*j), jobs))


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow(r)
