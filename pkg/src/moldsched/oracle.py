"""Exact answers for tiny inputs: optimal makespan and brute-force knapsack."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import lcm

from .model import Instance, Placement, Schedule, list_schedule

MAX_JOBS = 8
MAX_PROCS = 64


class OracleTooLarge(ValueError):
    pass


def _fit(profile, k, p):
    """Earliest start in a step profile [(t, free), ...] with k free procs for p units."""
    n = len(profile)
    i = 0
    while i < n:
        start = profile[i][0]
        if profile[i][1] < k:
            i += 1
            continue
        end = start + p
        j = i + 1
        ok = True
        while j < n and profile[j][0] < end:
            if profile[j][1] < k:
                ok = False
                break
            j += 1
        if ok:
            return start
        i = j + 1
    raise AssertionError("profile never frees up")


def _insert(profile, start, end, k):
    times = {t for t, _ in profile} | {start, end}
    out = []
    idx = 0
    cur = None
    for t in sorted(times):
        while idx < len(profile) and profile[idx][0] <= t:
            cur = profile[idx][1]
            idx += 1
        f = cur - k if start <= t < end else cur
        if out and out[-1][1] == f:
            continue
        out.append((t, f))
    return tuple(out)


def opt_makespan(inst: Instance):
    """Branch and bound over serial schedule generation.

    Every job is inserted at its earliest feasible start in the current
    processor profile; over all job orders and allotments these insertions
    produce every active schedule, and some active schedule is optimal.
    Returns ``(makespan, schedule)``.
    """
    n, m = inst.n, inst.m
    if n > MAX_JOBS or m > MAX_PROCS:
        raise OracleTooLarge(f"oracle limited to n <= {MAX_JOBS}, m <= {MAX_PROCS} (got n={n}, m={m})")
    jobs = list(inst.jobs)
    times = [[j.oracle.time(k) for k in range(1, m + 1)] for j in jobs]
    den = lcm(*(t.denominator for row in times for t in row))
    T = [[int(t * den) for t in row] for row in times]
    # efficient allotments: more processors must buy strictly less time
    allot = [[k for k in range(1, m + 1) if k == 1 or T[i][k - 1] < T[i][k - 2]] for i in range(n)]
    minwork = [min(k * T[i][k - 1] for k in allot[i]) for i in range(n)]
    mintime = [T[i][m - 1] for i in range(n)]
    keys = [repr(j.oracle) for j in jobs]
    twin_before = [[i2 for i2 in range(i) if keys[i2] == keys[i]] for i in range(n)]

    # incumbent from list scheduling on a few simple allotments
    from .estimator import estimate

    best = None
    best_plan = None
    seeds = [estimate(inst).allotment, {j.id: 1 for j in jobs}, {j.id: m for j in jobs}]
    for a in seeds:
        s = list_schedule(inst, a)
        ms = int(s.makespan * den)
        if best is None or ms < best:
            best = ms
            best_plan = {jid: (int(p.start * den), p.procs) for jid, p in s.placements.items()}

    area_lb = -(-sum(minwork) // m)
    global_lb = max(area_lb, max(mintime))
    seen = set()
    plan = {}
    # least work of job i among allotments finishing within a time limit
    by_time = [sorted((T[i][k - 1], k * T[i][k - 1]) for k in allot[i]) for i in range(n)]
    cache = {}

    def least_work(i, limit):
        key = (i, limit)
        if key not in cache:
            ws = [w for p, w in by_time[i] if p <= limit]
            cache[key] = min(ws) if ws else None
        return cache[key]

    def dfs(remaining, profile, cmax, used_area, last):
        nonlocal best, best_plan
        if not remaining:
            if cmax < best:
                best = cmax
                best_plan = dict(plan)
            return
        limit = best - 1
        need = used_area
        for i in remaining:
            w = least_work(i, limit - last[0])
            if w is None:
                return
            need += w
        if need > m * limit or cmax > limit:
            return
        state = (remaining, profile, last)
        if state in seen:
            return
        seen.add(state)
        for i in sorted(remaining):
            if any(t in remaining for t in twin_before[i]):
                continue
            rem = remaining - {i}
            for k in allot[i]:
                p = T[i][k - 1]
                if p >= best:
                    continue
                start = _fit(profile, k, p)
                # lists sorted by (start, index) reach every active schedule
                if (start, i) < last:
                    continue
                end = start + p
                if end >= best:
                    continue
                plan[jobs[i].id] = (start, k)
                dfs(rem, _insert(profile, start, end, k), max(cmax, end), used_area + k * p, (start, i))
                del plan[jobs[i].id]
                if best <= global_lb:
                    return

    if best > global_lb:
        dfs(frozenset(range(n)), ((0, m),), 0, 0, (0, -1))
    sched = Schedule.build(inst, {jid: (Fraction(s, den), k) for jid, (s, k) in best_plan.items()})
    return sched.makespan, sched


# --------------------------------------------------------------------------
# knapsack by enumeration


def _subsets(n):
    for r in range(n + 1):
        yield from combinations(range(n), r)


def kp_bruteforce(items, capacity) -> Fraction:
    if len(items) > 20:
        raise OracleTooLarge("brute-force knapsack limited to 20 items")
    best = Fraction(0)
    for sub in _subsets(len(items)):
        if sum(items[i].size for i in sub) <= capacity:
            best = max(best, sum((items[i].profit for i in sub), Fraction(0)))
    return best


def kpc_bruteforce(items, capacity, rho) -> Fraction:
    """Best profit when compressible items count (1 - rho) of their size."""
    if len(items) > 20:
        raise OracleTooLarge("brute-force knapsack limited to 20 items")
    rho = Fraction(rho)
    best = Fraction(0)
    for sub in _subsets(len(items)):
        size = sum(((1 - rho) * items[i].size if items[i].compressible else items[i].size) for i in sub)
        if size <= capacity:
            best = max(best, sum((items[i].profit for i in sub), Fraction(0)))
    return best
