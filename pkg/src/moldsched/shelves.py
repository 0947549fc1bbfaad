"""(3/2 + eps)-dual shelf algorithm.

Big jobs go into two shelves: S1 (height d) and S2 (height d/2, stacked on
top of S1). A knapsack picks S1 so that the total work stays below m*d minus
the small-job work. Transformation rules then move jobs into a full-height
column S0 until the schedule fits on m processors, and small jobs are filled
into the idle time next-fit.

Three variants share this skeleton:

* ``simple``  - knapsack with compressible items over the jobs themselves.
* ``bounded`` - jobs are rounded into item types and the knapsack is solved
  as a bounded knapsack over binary-split containers.
* ``linear``  - like ``bounded`` but the transformation rules key their queue
  on rounded processing times, so they need no heap.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, isqrt
from typing import NamedTuple, Optional

from .estimator import Accepted, ContractViolation, Rejected
from .fptas import clamp_eps, fptas_dual
from .knapsack import KpItem, bounded_kp_expand, geom, kpc_solve
from .model import Instance, Job, Placement, Schedule, as_fraction, validate_schedule

VARIANTS = ("simple", "bounded", "linear")


# --------------------------------------------------------------------------
# small/big split, profits, two-shelf work


class BigSmallSplit(NamedTuple):
    small: list
    big: list
    small_work: Fraction


def split_small_big(jobs, d) -> BigSmallSplit:
    d = as_fraction(d)
    small, big = [], []
    ws = Fraction(0)
    for j in jobs:
        t1 = j.oracle.time(1)
        if 2 * t1 <= d:
            small.append(j)
            ws += t1
        else:
            big.append(j)
    return BigSmallSplit(small, big, ws)


def _work_at(job: Job, t: Fraction, m: int) -> Fraction:
    k = job.oracle.gamma(t, m)
    if k is None:
        raise ValueError(f"job {job.id}: no allotment reaches {t}")
    return k * job.oracle.time(k)


def profit(job: Job, d, m: int) -> Fraction:
    """Work saved by running ``job`` in the tall shelf instead of the short one."""
    d = as_fraction(d)
    return _work_at(job, d / 2, m) - _work_at(job, d, m)


def two_shelf_work(selected, big, d, m: int) -> Fraction:
    d = as_fraction(d)
    sel = {j.id for j in selected}
    direct = sum(
        (_work_at(j, d, m) if j.id in sel else _work_at(j, d / 2, m) for j in big), Fraction(0)
    )
    via_profit = sum((_work_at(j, d / 2, m) for j in big), Fraction(0)) - sum(
        (profit(j, d, m) for j in big if j.id in sel), Fraction(0)
    )
    assert direct == via_profit
    return direct


# --------------------------------------------------------------------------
# rounding parameters and grids for the bounded/linear variants


def bounded_params(eps):
    """(delta, rho, b) with rho a lower bound on (sqrt(1+delta) - 1)/4."""
    eps = clamp_eps(eps)
    delta = eps / 5
    bits = 32 + (ceil(1 / delta)).bit_length() + 3
    scale = 1 << bits
    root = Fraction(isqrt(floor((1 + delta) * scale * scale)), scale)
    rho = (root - 1) / 4
    b = ceil(1 / (2 * rho - rho * rho))
    return delta, rho, b


@lru_cache(maxsize=64)
def _size_grid(b: int, rho: Fraction, m: int) -> tuple:
    """Integer stand-in for geom(b, m, 1+rho): consecutive ratios never exceed 1+rho."""
    out = [b]
    while out[-1] < m:
        g = out[-1]
        out.append(max(g + 1, int(g * (1 + rho))))
    return tuple(out)


@lru_cache(maxsize=64)
def _height_grid(rho: Fraction) -> tuple:
    return tuple(geom(Fraction(1, 2), 1, 1 + 4 * rho))


@lru_cache(maxsize=64)
def _profit_grid(delta: Fraction, b: int) -> tuple:
    """Dyadic stand-in for geom(delta/2, b/2, 1+delta/b), in units of d."""
    x = 1 + delta / b
    scale = 1 << 64
    out = [delta / 2]
    top = Fraction(b, 2)
    while out[-1] < top:
        out.append(Fraction(floor(out[-1] * x * scale), scale))
    return tuple(out)


def round_size(k: int, b: int, rho: Fraction, m: int) -> int:
    if k <= b:
        return k
    grid = _size_grid(b, rho, m)
    return grid[bisect_right(grid, k) - 1]


def round_height(t: Fraction, s: Fraction, rho: Fraction) -> Fraction:
    """Round t down onto s * geom(1/2, 1, 1+4rho); t must exceed s/2."""
    grid = _height_grid(rho)
    i = bisect_right(grid, t / s) - 1
    if i < 0:
        raise ContractViolation(f"height {t} not above half the shelf height {s}")
    return s * grid[i]


def round_profit_up(v: Fraction, d: Fraction, delta: Fraction, b: int) -> Fraction:
    grid = _profit_grid(delta, b)
    i = bisect_left(grid, v / d)
    if i >= len(grid):
        raise ContractViolation(f"profit {v} above the rounding range")
    return d * grid[i]


@dataclass
class ItemTypeTable:
    """Job rounding for the bounded knapsack: one entry per (size, profit, compressible) type."""

    delta: Fraction
    rho: Fraction
    b: int
    types: list = field(default_factory=list)  # [(size, profit, count, compressible)]
    members: list = field(default_factory=list)  # job ids per type

    @property
    def k_compressible(self) -> int:
        return sum(1 for t in self.types if t[3])

    @property
    def k_incompressible(self) -> int:
        return sum(1 for t in self.types if not t[3])


def build_type_table(jobs, d, m: int, delta, rho, b) -> ItemTypeTable:
    d = as_fraction(d)
    h = d / 2
    grid = _height_grid(rho)
    # second largest grid value not above 1
    top2 = grid[-3] if grid[-1] > 1 else grid[-2]
    table = ItemTypeTable(delta, rho, b)
    index = {}
    for j in jobs:
        o = j.oracle
        kd, kh = o.gamma(d, m), o.gamma(h, m)
        td, th = o.time(kd), o.time(kh)
        # every big job is taller than half of either shelf
        if 2 * td <= d or 2 * th <= h:
            raise ContractViolation(f"job {j.id}: height not above half the shelf")
        gd, gh = round_size(kd, b, rho, m), round_size(kh, b, rho, m)
        v = kh * th - kd * td
        if v == 0:
            p = Fraction(0)
        elif gh < b:
            p = Fraction(0) if v < delta * d / 2 else round_profit_up(v, d, delta, b)
        else:
            rd, rh = round_height(td, d, rho), round_height(th, h, rho)
            for k, r, s in ((kd, rd, d), (kh, rh, h)):
                if k >= b and r / s < top2:
                    raise ContractViolation(f"job {j.id}: wide job below the two largest heights")
            p = max(Fraction(0), rh * gh - rd * gd)
        key = (gd, p, kd >= b)
        if key not in index:
            index[key] = len(table.types)
            table.types.append([gd, p, 0, kd >= b])
            table.members.append([])
        t = index[key]
        table.types[t][2] += 1
        table.members[t].append(j.id)
    table.types = [tuple(t) for t in table.types]
    return table


def type_count_bounds(delta, rho, b: int, m: int) -> tuple:
    """Explicit counting bounds (k_C, k_I) for the type table.

    Compressible: size class at d times size class at d/2 times two heights
    each. Incompressible narrow-in-S2: (b-1) sizes times (profit classes + 1).
    Incompressible wide-in-S2: (b-1) sizes, |heights| at d, size classes and
    two heights at d/2.
    """
    g = len(_size_grid(b, as_fraction(rho), max(m, b)))
    hc = len(_height_grid(as_fraction(rho)))
    pc = len(_profit_grid(as_fraction(delta), b))
    kc = g * g * 4
    ki = (b - 1) * (pc + 1) + (b - 1) * hc * g * 2
    return kc, ki


# --------------------------------------------------------------------------
# shelf assignment and the transformation rules


@dataclass
class ShelfAssignment:
    """Big jobs split over S0 (full height), S1 (height d) and S2 (height d/2).

    ``s0`` holds single jobs with their processor count, ``pairs`` two
    one-processor jobs run back to back, ``stacks`` a lower S1 job whose
    first processor also carries a one-processor upper job after it ends.
    """

    d: Fraction
    m: int
    s1: dict = field(default_factory=dict)
    s2: dict = field(default_factory=dict)
    s0: dict = field(default_factory=dict)
    pairs: list = field(default_factory=list)
    stacks: list = field(default_factory=list)  # (lower, k_lower, upper)

    @property
    def p0(self) -> int:
        return sum(self.s0.values()) + len(self.pairs) + len(self.stacks)

    @property
    def p1(self) -> int:
        return sum(self.s1.values()) + sum(k - 1 for _, k, _ in self.stacks)

    @property
    def p2(self) -> int:
        return sum(self.s2.values())

    @property
    def width(self) -> int:
        return self.p0 + max(self.p1, self.p2)

    def work(self, jobs: dict) -> Fraction:
        w = Fraction(0)
        for part in (self.s0, self.s1, self.s2):
            for jid, k in part.items():
                w += k * jobs[jid].oracle.time(k)
        for a, b in self.pairs:
            w += jobs[a].oracle.time(1) + jobs[b].oracle.time(1)
        for lo, k, up in self.stacks:
            w += k * jobs[lo].oracle.time(k) + jobs[up].oracle.time(1)
        return w


class _BucketQueue:
    """Min-queue over keys drawn from a small sorted grid (one list per grid value)."""

    def __init__(self, grid):
        self.grid = grid
        self.buckets = [deque() for _ in grid]
        self.lo = len(grid)
        self.size = 0

    def push(self, key, item):
        i = bisect_left(self.grid, key)
        self.buckets[i].append(item)
        self.lo = min(self.lo, i)
        self.size += 1

    def _advance(self):
        while self.lo < len(self.grid) and not self.buckets[self.lo]:
            self.lo += 1

    def peek(self):
        self._advance()
        if self.lo >= len(self.grid):
            return None
        return self.grid[self.lo], self.buckets[self.lo][0]

    def pop(self):
        self._advance()
        self.size -= 1
        return self.buckets[self.lo].popleft()

    def __bool__(self):
        return self.peek() is not None


class _Heap:
    def __init__(self):
        self.h = []

    def push(self, key, item):
        heapq.heappush(self.h, (key, item))

    def peek(self):
        return self.h[0] if self.h else None

    def pop(self):
        return heapq.heappop(self.h)[1]

    def __bool__(self):
        return bool(self.h)


def apply_transformation_rules(shelf: ShelfAssignment, jobs: dict, mode: str = "exact", rho=None) -> ShelfAssignment:
    """Exhaustively apply the three S0 rules to a two-shelf assignment.

    ``mode="bucketed"`` classifies S1 jobs by their processing time rounded
    down onto d * geom(1/2, 1, 1+4rho); the makespan may then exceed 3/2*d by
    a factor of at most 1+4rho.
    """
    d, m = shelf.d, shelf.m
    H = Fraction(3, 2) * d
    Q = Fraction(3, 4) * d
    if mode == "exact":
        queue = _Heap()

        def key(t):
            return t
    elif mode == "bucketed":
        unit = _height_grid(as_fraction(rho))
        grid = [d * u for u in unit]
        queue = _BucketQueue(grid)

        def key(t):
            if 2 * t < d:
                return t
            return grid[bisect_right(grid, t) - 1]
    else:
        raise ValueError(f"unknown rule mode {mode!r}")

    out = ShelfAssignment(d, m)
    out.s2 = dict(shelf.s2)
    out.s0 = dict(shelf.s0)
    out.pairs = list(shelf.pairs)
    out.stacks = list(shelf.stacks)
    p01 = out.p0 + sum(k - 1 for _, k, _ in out.stacks)
    pending = None  # (id, key) of an unpaired one-processor job in S1

    def try_stack():
        nonlocal pending, p01
        top = queue.peek()
        if pending is None or top is None:
            return
        tkey, lower = top
        if tkey + pending[1] <= H:
            queue.pop()
            k = out.s1.pop(lower)
            out.s1.pop(pending[0])
            out.stacks.append((lower, k, pending[0]))
            p01 -= 1
            pending = None

    def add_s1(jid, k):
        nonlocal pending, p01
        kt = key(jobs[jid].oracle.time(k))
        if kt <= Q and k > 1:  # rule 1
            out.s0[jid] = k - 1
            p01 += k - 1
        elif kt <= Q:  # rule 2
            if pending is not None:
                out.s1.pop(pending[0])
                out.pairs.append((pending[0], jid))
                pending = None
            else:
                out.s1[jid] = 1
                p01 += 1
                pending = (jid, kt)
                try_stack()
        else:
            out.s1[jid] = k
            p01 += k
            queue.push(kt, jid)
            try_stack()

    for jid, k in shelf.s1.items():
        add_s1(jid, k)

    for jid in list(out.s2):
        q = m - p01
        o = jobs[jid].oracle
        if q >= 1 and o.time(q) <= H:  # rule 3
            p = o.gamma(H, m)
            del out.s2[jid]
            if o.time(p) > d:
                out.s0[jid] = p
                p01 += p
            else:
                add_s1(jid, p)
    assert p01 == out.p0 + out.p1
    return out


# --------------------------------------------------------------------------
# laying out the shelves and inserting small jobs


def _layout(shelf: ShelfAssignment, jobs: dict):
    """Placements for the big jobs plus idle-time groups ``[count, free_from, free_to]``."""
    d = shelf.d
    H = Fraction(3, 2) * d
    place = {}
    groups = []
    zero = Fraction(0)

    def t(jid, k):
        return jobs[jid].oracle.time(k)

    for jid, k in shelf.s0.items():
        place[jid] = Placement(zero, k, t(jid, k))
        groups.append([k, t(jid, k), H])
    for a, b in shelf.pairs:
        ta, tb = t(a, 1), t(b, 1)
        place[a] = Placement(zero, 1, ta)
        place[b] = Placement(ta, 1, tb)
        groups.append([1, ta + tb, H])
    low_runs = []  # (count, busy_until) for the S1/S2 region
    for lo, k, up in shelf.stacks:
        tl, tu = t(lo, k), t(up, 1)
        place[lo] = Placement(zero, k, tl)
        place[up] = Placement(tl, 1, tu)
        groups.append([1, tl + tu, H])
        if k > 1:
            low_runs.append((k - 1, tl))
    for jid, k in shelf.s1.items():
        place[jid] = Placement(zero, k, t(jid, k))
        low_runs.append((k, t(jid, k)))
    high_runs = []
    for jid, k in shelf.s2.items():
        tj = t(jid, k)
        place[jid] = Placement(H - tj, k, tj)
        high_runs.append((k, H - tj))

    rest = shelf.m - shelf.p0
    low_runs.append((rest, zero))
    high_runs.append((rest, H))
    i = j = 0
    li, hj = low_runs[0][0], high_runs[0][0]
    left = rest
    while left > 0:
        c = min(li, hj, left)
        groups.append([c, low_runs[i][1], high_runs[j][1]])
        left -= c
        li -= c
        hj -= c
        if li == 0 and i + 1 < len(low_runs):
            i += 1
            li = low_runs[i][0]
        if hj == 0 and j + 1 < len(high_runs):
            j += 1
            hj = high_runs[j][0]
    return place, groups


def insert_small_jobs(groups, small, horizon=None) -> Optional[dict]:
    """Next-fit over processor groups; returns placements or None if a job does not fit."""
    rest = deque(g for g in groups if g[0] > 0)
    place = {}
    cur = None
    for j in small:
        p = j.oracle.time(1)
        while cur is None or cur[2] - cur[1] < p:
            if not rest:
                return None
            cur = list(rest.popleft())
            if horizon is not None:
                cur[2] = min(cur[2], horizon)
        if cur[0] > 1:
            rest.appendleft([cur[0] - 1, cur[1], cur[2]])
            cur[0] = 1
        place[j.id] = Placement(cur[1], 1, p)
        cur[1] += p
    return place


# --------------------------------------------------------------------------
# the dual algorithm


def _select_simple(cands, m_cap: int, d: Fraction, m: int, eps: Fraction):
    rho = eps / 6
    inv = ceil(1 / rho)
    items = []
    for j in cands:
        k = j.oracle.gamma(d, m)
        items.append(KpItem(j.id, k, profit(j, d, m), k * rho >= 1))
    inc = sum(it.size for it in items if not it.compressible)
    res = kpc_solve(items, m_cap, rho / 2, inv, min(m_cap, inc), max(1, ceil(m_cap * rho)))
    return set(res.items), (1 + 4 * rho) * d, None


def _select_bounded(cands, m_cap: int, d: Fraction, m: int, eps: Fraction):
    delta, rho, b = bounded_params(eps)
    table = build_type_table(cands, d, m, delta, rho, b)
    conts = bounded_kp_expand(table.types)
    items = [c.item(i) for i, c in enumerate(conts)]
    inc = sum(it.size for it in items if not it.compressible)
    res = kpc_solve(items, m_cap, rho / 2, b, min(m_cap, inc), max(1, ceil(m_cap * rho)))
    taken = [0] * len(table.types)
    for i in res.items:
        taken[conts[i].type] += conts[i].mult
    chosen = set()
    for t, cnt in enumerate(taken):
        chosen.update(table.members[t][:cnt])
    return chosen, (1 + delta) ** 2 * d, rho


def mrt_dual(inst: Instance, d, eps, variant: str = "bounded", check: bool = True, route: bool = True):
    """Accepts with a schedule of makespan <= (3/2 + eps) d whenever OPT <= d.

    With ``route`` (the default) instances with m >= 16n go to the large-m
    dual at eps = 1/2, which is already a 3/2-dual there; the shelf knapsack
    would otherwise run with capacities up to n times the compression bound.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    eps = clamp_eps(eps)
    d = as_fraction(d)
    m = inst.m
    if d <= 0:
        return Rejected("non-positive deadline")
    if route and m >= 16 * inst.n:
        return fptas_dual(inst, d, Fraction(1, 2))

    jobs = {j.id: j for j in inst.jobs}
    for j in inst.jobs:
        if j.oracle.gamma(d, m) is None:
            return Rejected(f"job {j.id} cannot finish by {d}")
    split = split_small_big(inst.jobs, d)
    forced = [j for j in split.big if j.oracle.gamma(d / 2, m) is None]
    cands = [j for j in split.big if j.oracle.gamma(d / 2, m) is not None]
    m_cap = m - sum(j.oracle.gamma(d, m) for j in forced)
    if m_cap < 0:
        return Rejected("tall jobs alone need more than m processors")

    if variant == "simple":
        chosen, dp, rho = _select_simple(cands, m_cap, d, m, eps)
    else:
        chosen, dp, rho = _select_bounded(cands, m_cap, d, m, eps)
    chosen |= {j.id for j in forced}

    split2 = split_small_big(inst.jobs, dp)
    shelf = ShelfAssignment(dp, m)
    for j in split2.big:
        if j.id in chosen:
            shelf.s1[j.id] = j.oracle.gamma(dp, m)
        else:
            shelf.s2[j.id] = j.oracle.gamma(dp / 2, m)
    two_shelf = sum((k * jobs[jid].oracle.time(k) for jid, k in shelf.s1.items()), Fraction(0))
    two_shelf += sum((k * jobs[jid].oracle.time(k) for jid, k in shelf.s2.items()), Fraction(0))
    if two_shelf + split2.small_work > m * dp:
        return Rejected("two-shelf work exceeds the available area")
    if shelf.p1 > m:
        raise ContractViolation("knapsack selection does not fit into S1")

    mode = "bucketed" if variant == "linear" else "exact"
    final = apply_transformation_rules(shelf, jobs, mode, rho)
    if final.width > m:
        raise ContractViolation(f"transformation rules left {final.width} > m={m} processors in use")
    place, groups = _layout(final, jobs)
    small = insert_small_jobs(groups, split2.small)
    if small is None:
        raise ContractViolation("next-fit could not place every small job")
    place.update(small)
    sched = Schedule(place)
    if check:
        ok = validate_schedule(sched, inst)
        if not ok:
            raise ContractViolation(f"shelf schedule invalid: {ok.detail}")
        bound = Fraction(3, 2) * dp
        if variant == "linear":
            bound *= 1 + 4 * rho
        if sched.makespan > bound or sched.makespan > (Fraction(3, 2) + eps) * d:
            raise ContractViolation(f"makespan {sched.makespan} above the guaranteed bound")
    return Accepted(sched)
