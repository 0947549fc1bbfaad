"""Makespan estimate with ratio 2 and the dual-to-approximation driver."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .model import Instance, Schedule, as_fraction


class ContractViolation(RuntimeError):
    """A dual algorithm (or one of our own guarantees) broke its contract."""


@dataclass(frozen=True)
class Estimate:
    omega: Fraction
    allotment: dict
    threshold: Fraction  # the t at which the allotment was taken


@dataclass(frozen=True)
class Accepted:
    schedule: Schedule

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Rejected:
    reason: str = ""

    def __bool__(self):
        return False


DualResult = Union[Accepted, Rejected]


def _profile(inst: Instance, t: Fraction):
    """Allotment gamma(., t) with its processing times, or None if some job cannot make t."""
    ks, ts = [], []
    m = inst.m
    for j in inst.jobs:
        k = j.oracle.gamma(t, m)
        if k is None:
            return None
        ks.append(k)
        ts.append(j.oracle.time(k))
    return ks, ts


def _work(ks, ts) -> Fraction:
    return sum((k * t for k, t in zip(ks, ts)), Fraction(0))


def _next(inst: Instance, ks) -> Optional[Fraction]:
    """Smallest breakpoint strictly above the threshold that gave ``ks``."""
    vals = [j.oracle.time(k - 1) for j, k in zip(inst.jobs, ks) if k > 1]
    return min(vals) if vals else None


def estimate(inst: Instance) -> Estimate:
    """omega = min over thresholds t of max(W(t)/m, t), W(t) = sum_j work(gamma_j(t)).

    W is a non-increasing step function that only changes at processing-time
    breakpoints, so the minimum sits on a breakpoint. We bisect over values
    for the first breakpoint with W(t) <= m*t and compare it to its
    predecessor. Snapping a value v down to the largest breakpoint b <= v
    keeps the allotment, so each step costs one gamma and one time per job.
    """
    m = inst.m
    t0 = max(j.oracle.time(m) for j in inst.jobs)
    tmax = max(j.oracle.time(1) for j in inst.jobs)

    ks, ts = _profile(inst, t0)
    w = _work(ks, ts)
    if w <= m * t0:
        return Estimate(t0, _as_map(inst, ks), t0)
    ks_hi, ts_hi = _profile(inst, tmax)
    w_hi = _work(ks_hi, ts_hi)
    if w_hi > m * tmax:
        return Estimate(w_hi / m, _as_map(inst, ks_hi), tmax)

    lo, lo_ks, lo_w = t0, ks, w
    hi, hi_ks = tmax, ks_hi
    while True:
        v = (lo + hi) / 2
        bks, bts = _profile(inst, v)
        b = max(bts)
        if b <= lo:
            b = _next(inst, bks)
            if b is None or b >= hi:
                break
            bks, bts = _profile(inst, b)
        bw = _work(bks, bts)
        if bw <= m * b:
            hi, hi_ks = b, bks
        else:
            lo, lo_ks, lo_w = b, bks, bw
    if hi <= lo_w / m:
        return Estimate(hi, _as_map(inst, hi_ks), hi)
    return Estimate(lo_w / m, _as_map(inst, lo_ks), lo)


def _as_map(inst: Instance, ks) -> dict:
    return {j.id: k for j, k in zip(inst.jobs, ks)}


def dual_to_approx(inst: Instance, eps, dual: Callable[[Fraction], DualResult], c=1, est: Optional[Estimate] = None) -> Schedule:
    """Turn a c-dual algorithm into a (c + eps)-approximation.

    ``dual(d)`` must accept whenever OPT <= d and then return a schedule of
    makespan at most c*d. We bisect d over [omega, 2*omega] until the bracket
    ratio drops to 1 + eps/c.
    """
    eps = as_fraction(eps)
    c = as_fraction(c)
    if not 0 < eps:
        raise ValueError("eps must be positive")
    if est is None:
        est = estimate(inst)
    lo = est.omega
    hi = 2 * lo
    res = dual(hi)
    if not res:
        raise ContractViolation(f"dual rejected d = 2*omega = {hi}; OPT <= 2*omega always holds")
    best = res.schedule
    target = 1 + eps / c
    while hi > lo * target:
        mid = (lo + hi) / 2
        res = dual(mid)
        if res:
            hi = mid
            if res.schedule.makespan < best.makespan:
                best = res.schedule
        else:
            lo = mid
    return best
