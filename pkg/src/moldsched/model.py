"""Jobs, instances, schedules and the processing-time oracles behind them.

All durations are exact :class:`fractions.Fraction` values so that every
accept/reject decision downstream is free of rounding ties.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from typing import Iterable, NamedTuple, Optional, Sequence, Union

Number = Union[int, Fraction, str, float]

# 2^theta is stored as a dyadic rational with this many fractional bits.
_POW_BITS = 32


def as_fraction(x: Number) -> Fraction:
    """Parse ints, Fractions, "p/q" strings and decimal floats exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x).strip())


def fmt(x: Fraction) -> str:
    """Serialize a rational as "p/q" (or "p" when integral)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class MonotonyError(ValueError):
    pass


# --------------------------------------------------------------------------
# processing-time oracles


@dataclass(frozen=True)
class TableOracle:
    """Explicit list ``times[k-1]`` for k = 1..m."""

    times: tuple

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(as_fraction(t) for t in self.times))
        if not self.times:
            raise ValueError("empty processing-time table")

    kind = "table"

    @property
    def max_procs(self) -> int:
        return len(self.times)

    def time(self, k: int) -> Fraction:
        return self.times[k - 1]

    def gamma(self, t: Fraction, m: int) -> Optional[int]:
        times = self.times
        if times[m - 1] > t:
            return None
        lo, hi = 1, m
        while lo < hi:
            mid = (lo + hi) // 2
            if times[mid - 1] <= t:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def to_json(self) -> dict:
        return {"kind": "table", "times": [fmt(t) for t in self.times]}


@lru_cache(maxsize=4096)
def _powers(r: Fraction) -> tuple:
    out = [Fraction(1)]
    for _ in range(64):
        out.append(out[-1] * r)
    return tuple(out)


@dataclass(frozen=True)
class PowerOracle:
    """Power-law speedup ``t1 / s(k)`` with ``s(k) ~ k**theta``.

    ``s`` is exact at powers of two (``s(2**i) = r**i`` with ``r`` a dyadic
    approximation of ``2**theta``) and linear in between. The resulting speedup
    is concave with ``s(1) = 1``, so time never increases and work never
    decreases, for every ``k`` up to 2**62, without scanning. For theta = 1 the
    speedup is exactly ``k`` and for theta = 0 it is exactly 1.
    """

    t1: Fraction
    theta: Fraction
    r: Fraction = field(init=False, repr=False, compare=False)

    kind = "power"

    def __post_init__(self):
        t1 = as_fraction(self.t1)
        theta = as_fraction(self.theta)
        if t1 <= 0:
            raise ValueError("t1 must be positive")
        if not 0 <= theta <= 1:
            raise MonotonyError(f"theta={theta} outside [0, 1] gives a non-monotone job")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "theta", theta)
        if theta == 0:
            r = Fraction(1)
        elif theta == 1:
            r = Fraction(2)
        else:
            a = round(2 ** float(theta) * 2**_POW_BITS)
            a = min(max(a, 2**_POW_BITS), 2 ** (_POW_BITS + 1))
            r = Fraction(a, 2**_POW_BITS)
        object.__setattr__(self, "r", r)

    max_procs = None

    def speedup(self, k: int) -> Fraction:
        i = k.bit_length() - 1
        base = 1 << i
        ri = _powers(self.r)[i]
        return ri * (1 + (k - base) * (self.r - 1) / base)

    def time(self, k: int) -> Fraction:
        return self.t1 / self.speedup(k)

    def gamma(self, t: Fraction, m: int) -> Optional[int]:
        if self.t1 <= t:
            return 1
        if self.r == 1:
            return None
        target = self.t1 / t  # need speedup >= target
        # smallest anchor exponent i with r**i >= target
        pw = _powers(self.r)
        lo, hi = 0, max(m.bit_length(), 1)
        if pw[hi] < target:
            return None
        while lo < hi:
            mid = (lo + hi) // 2
            if pw[mid] >= target:
                hi = mid
            else:
                lo = mid + 1
        i = lo  # i >= 1 since target > 1
        base = 1 << (i - 1)
        ri = pw[i - 1]
        need = (target / ri - 1) * base / (self.r - 1)
        k = base + max(0, ceil(need))
        k = min(k, 1 << i)
        return k if k <= m else None

    def to_json(self) -> dict:
        return {"kind": "power", "t1": fmt(self.t1), "theta": fmt(self.theta)}


@dataclass(frozen=True)
class CappedOracle:
    """Linear speedup up to ``cap`` processors, flat afterwards."""

    t1: Fraction
    cap: int

    kind = "capped"

    def __post_init__(self):
        t1 = as_fraction(self.t1)
        if t1 <= 0:
            raise ValueError("t1 must be positive")
        if int(self.cap) < 1:
            raise ValueError("cap must be >= 1")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "cap", int(self.cap))

    max_procs = None

    def time(self, k: int) -> Fraction:
        return self.t1 / min(k, self.cap)

    def gamma(self, t: Fraction, m: int) -> Optional[int]:
        k = max(1, ceil(self.t1 / t))
        if k > self.cap or k > m:
            return None
        return k

    def to_json(self) -> dict:
        return {"kind": "capped", "t1": fmt(self.t1), "cap": self.cap}


@dataclass(frozen=True)
class ReductionOracle:
    """``time(k) = m*a - k + 1``, the job shape used by the 4-Partition reduction."""

    a: int
    m: int

    kind = "reduction"

    def __post_init__(self):
        if int(self.a) < 2:
            raise ValueError("reduction jobs need a >= 2")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "m", int(self.m))

    max_procs = None

    def time(self, k: int) -> Fraction:
        return Fraction(self.m * self.a - k + 1)

    def gamma(self, t: Fraction, m: int) -> Optional[int]:
        k = max(1, ceil(self.m * self.a + 1 - t))
        return k if k <= m else None

    def to_json(self) -> dict:
        return {"kind": "reduction", "a": self.a, "m": self.m}


Oracle = Union[TableOracle, PowerOracle, CappedOracle, ReductionOracle]


def oracle_from_json(d: dict) -> Oracle:
    kind = d.get("kind")
    if kind == "table":
        return TableOracle(tuple(d["times"]))
    if kind == "power":
        return PowerOracle(d["t1"], d["theta"])
    if kind == "capped":
        return CappedOracle(d["t1"], d["cap"])
    if kind == "reduction":
        return ReductionOracle(d["a"], d["m"])
    raise ValueError(f"unknown oracle kind {kind!r}")


# --------------------------------------------------------------------------
# jobs and instances


@dataclass(frozen=True)
class Job:
    id: str
    oracle: Oracle


@dataclass(frozen=True)
class Instance:
    jobs: tuple
    m: int

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        m = int(self.m)
        object.__setattr__(self, "m", m)
        if m < 1:
            raise ValueError("m must be >= 1")
        if not self.jobs:
            raise ValueError("an instance needs at least one job")
        ids = [j.id for j in self.jobs]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate job ids")
        for j in self.jobs:
            o = j.oracle
            if isinstance(o, TableOracle) and len(o.times) != m:
                raise ValueError(f"job {j.id}: table has {len(o.times)} entries, m={m}")
            if isinstance(o, ReductionOracle) and o.m * o.a < 2 * (m - 1):
                raise MonotonyError(f"job {j.id}: reduction job not work-monotone on 1..{m}")
            if isinstance(o, ReductionOracle) and o.m * o.a - m + 1 <= 0:
                raise ValueError(f"job {j.id}: non-positive processing time")

    @property
    def n(self) -> int:
        return len(self.jobs)

    def job(self, job_id: str) -> Job:
        for j in self.jobs:
            if j.id == job_id:
                return j
        raise KeyError(job_id)


def _check_k(k: int, m: int):
    if not 1 <= k <= m:
        raise IndexError(f"processor count {k} outside 1..{m}")


def ptime(job: Job, k: int, m: Optional[int] = None) -> Fraction:
    if m is None:
        m = job.oracle.max_procs or k
    _check_k(k, m)
    return job.oracle.time(k)


def work(job: Job, k: int, m: Optional[int] = None) -> Fraction:
    return k * ptime(job, k, m)


def gamma(job: Job, t: Number, m: int) -> Optional[int]:
    """Least processor count in 1..m whose processing time is at most ``t``."""
    t = as_fraction(t)
    if t <= 0:
        raise ValueError("threshold must be positive")
    return job.oracle.gamma(t, m)


def compress_count(b: int, rho: Number) -> int:
    """Processor count left after compressing ``b`` processors by factor ``rho``."""
    rho = as_fraction(rho)
    if not 0 < rho <= Fraction(1, 4):
        raise ValueError("compression factor must lie in (0, 1/4]")
    if b * rho < 1:
        raise ValueError(f"cannot compress {b} processors with rho={rho}: need b >= 1/rho")
    return floor(b * (1 - rho))


# --------------------------------------------------------------------------
# validation


class Check(NamedTuple):
    ok: bool
    detail: str = ""
    k: Optional[int] = None
    makespan: Optional[Fraction] = None

    def __bool__(self):
        return self.ok


def validate_monotone(job: Job, m: int) -> Check:
    """Scan an explicit table; parametric oracles are monotone by construction."""
    o = job.oracle
    if not isinstance(o, TableOracle):
        return Check(True, "monotone by construction")
    if len(o.times) != m:
        return Check(False, f"table has {len(o.times)} entries, expected {m}")
    times = o.times
    for k in range(1, m + 1):
        if times[k - 1] <= 0:
            return Check(False, f"non-positive time at k={k}", k)
    for k in range(2, m + 1):
        if times[k - 1] > times[k - 2]:
            return Check(False, f"time increases at k={k}", k)
        if k * times[k - 1] < (k - 1) * times[k - 2]:
            return Check(
                False,
                f"work decreases at k={k}; raise time({k}) to at least "
                f"{fmt((k - 1) * times[k - 2] / k)}",
                k,
            )
    return Check(True)


class Placement(NamedTuple):
    start: Fraction
    procs: int
    duration: Fraction

    @property
    def end(self) -> Fraction:
        return self.start + self.duration


@dataclass(frozen=True)
class Schedule:
    placements: dict

    @property
    def makespan(self) -> Fraction:
        return max((p.end for p in self.placements.values()), default=Fraction(0))

    def __len__(self):
        return len(self.placements)

    @classmethod
    def build(cls, inst: Instance, entries) -> "Schedule":
        """``entries`` maps job id -> (start, procs)."""
        jobs = {j.id: j for j in inst.jobs}
        out = {}
        for jid, (start, procs) in dict(entries).items():
            out[jid] = Placement(as_fraction(start), int(procs), ptime(jobs[jid], int(procs), inst.m))
        return cls(out)

    def to_json(self) -> dict:
        return {
            "jobs": {
                jid: {"start": fmt(p.start), "procs": p.procs}
                for jid, p in sorted(self.placements.items())
            },
            "makespan": fmt(self.makespan),
        }


def peak_demand(placements: Iterable[Placement]) -> int:
    events = []
    for p in placements:
        events.append((p.start, 1, p.procs))
        events.append((p.end, 0, -p.procs))
    # finishes sort before starts at equal times
    events.sort(key=lambda e: (e[0], e[1]))
    cur = peak = 0
    for _, _, delta in events:
        cur += delta
        peak = max(peak, cur)
    return peak


def validate_schedule(s: Schedule, inst: Instance) -> Check:
    jobs = {j.id: j for j in inst.jobs}
    if set(s.placements) != set(jobs):
        missing = set(jobs) - set(s.placements)
        extra = set(s.placements) - set(jobs)
        return Check(False, f"job set mismatch: missing={sorted(missing)} extra={sorted(extra)}")
    for jid, p in s.placements.items():
        if not 1 <= p.procs <= inst.m:
            return Check(False, f"job {jid}: {p.procs} processors outside 1..{inst.m}")
        if p.start < 0:
            return Check(False, f"job {jid}: negative start")
        if p.duration != jobs[jid].oracle.time(p.procs):
            return Check(False, f"job {jid}: duration does not match ptime({p.procs})")
    peak = peak_demand(s.placements.values())
    if peak > inst.m:
        return Check(False, f"processor demand {peak} exceeds m={inst.m}")
    return Check(True, makespan=s.makespan)


# --------------------------------------------------------------------------
# list scheduling


def list_schedule(inst: Instance, allotment: dict, order: Optional[Sequence[str]] = None) -> Schedule:
    """Greedy list scheduling for a fixed allotment.

    At every event the pending jobs are scanned in list order and each one that
    fits into the currently free processors is started. The result is a
    non-delay schedule with makespan at most ``2 * max(W/m, max time)``.
    """
    m = inst.m
    jobs = {j.id: j for j in inst.jobs}
    if order is None:
        order = [j.id for j in inst.jobs]
    if sorted(order) != sorted(jobs):
        raise ValueError("order must list every job exactly once")
    for jid in order:
        if not 1 <= allotment[jid] <= m:
            raise ValueError(f"job {jid}: allotment {allotment[jid]} outside 1..{m}")

    pending = list(order)
    running: list = []  # heap of (end, procs)
    free = m
    now = Fraction(0)
    out = {}
    while pending:
        rest = []
        for jid in pending:
            k = allotment[jid]
            if k <= free:
                dur = jobs[jid].oracle.time(k)
                out[jid] = Placement(now, k, dur)
                heapq.heappush(running, (now + dur, k))
                free -= k
            else:
                rest.append(jid)
        pending = rest
        if not pending:
            break
        now, k = heapq.heappop(running)
        free += k
        while running and running[0][0] == now:
            free += heapq.heappop(running)[1]
    return Schedule(out)
