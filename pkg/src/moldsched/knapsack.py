"""0/1 knapsack machinery: Lawler pair lists, one-pass multi-capacity solving,
adaptive size normalization for compressible items, and the compressible
knapsack solver built on top of them.

Sizes are integers, profits exact rationals. A pair list is a list of
``(size, profit, trace)`` tuples sorted by size with strictly increasing
profit; ``trace`` is a cons list ``(item_index, previous_trace)`` used to
recover the chosen set.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, NamedTuple, Optional, Sequence

from .model import as_fraction


@dataclass(frozen=True)
class KpItem:
    id: object
    size: int
    profit: Fraction
    compressible: bool = False

    def __post_init__(self):
        if int(self.size) < 1:
            raise ValueError("item size must be >= 1")
        object.__setattr__(self, "size", int(self.size))
        object.__setattr__(self, "profit", as_fraction(self.profit))


class KnapsackResult(NamedTuple):
    profit: Fraction
    items: tuple  # chosen item ids, in input order
    size: Fraction = Fraction(0)  # true (uncompressed) size of the chosen items


def _unwind(trace) -> list:
    out = []
    while trace is not None:
        idx, trace = trace
        out.append(idx)
    out.reverse()
    return out


def _result(items: Sequence[KpItem], profit, trace) -> KnapsackResult:
    chosen = _unwind(trace)
    return KnapsackResult(
        Fraction(profit), tuple(items[i].id for i in chosen), Fraction(sum(items[i].size for i in chosen))
    )


def _merge(old: list, new: list) -> list:
    """Merge two size-sorted pair lists and drop dominated pairs."""
    out = []
    best = None
    i = j = 0
    lo, ln = len(old), len(new)
    while i < lo or j < ln:
        if j >= ln or (i < lo and (old[i][0], -old[i][1]) <= (new[j][0], -new[j][1])):
            cand = old[i]
            i += 1
        else:
            cand = new[j]
            j += 1
        if best is None or cand[1] > best:
            if out and out[-1][0] == cand[0]:
                out[-1] = cand
            else:
                out.append(cand)
            best = cand[1]
    return out


def pair_list(items: Sequence[KpItem], capacity) -> list:
    """Lawler's list of non-dominated ``(size, profit, trace)`` pairs up to ``capacity``."""
    pairs = [(0, Fraction(0), None)]
    for idx, it in enumerate(items):
        s, p = it.size, it.profit
        shifted = [(a + s, b + p, (idx, tr)) for a, b, tr in pairs if a + s <= capacity]
        if shifted:
            pairs = _merge(pairs, shifted)
    return pairs


def kp_exact(items: Sequence[KpItem], capacity) -> KnapsackResult:
    if capacity < 0:
        raise ValueError("capacity must be non-negative")
    pairs = pair_list(items, capacity)
    _, p, tr = pairs[-1]
    return _result(items, p, tr)


def kp_multi_capacity(items: Sequence[KpItem], capacities: Iterable) -> dict:
    """Optimal profit for every capacity in one DP pass up to the largest one."""
    caps = list(capacities)
    if not caps:
        return {}
    pairs = pair_list(items, max(caps))
    sizes = [s for s, _, _ in pairs]
    out = {}
    for beta in caps:
        idx = bisect_right(sizes, beta) - 1
        if idx < 0:
            out[beta] = KnapsackResult(Fraction(0), (), Fraction(0))
        else:
            _, p, tr = pairs[idx]
            out[beta] = _result(items, p, tr)
    return out


# --------------------------------------------------------------------------
# geometric capacity sets


def geom(L, U, x) -> list:
    """``[L * x**i for i in 0..ceil(log_x(U / L))]`` in exact arithmetic."""
    L, U, x = as_fraction(L), as_fraction(U), as_fraction(x)
    if not (0 < L <= U) or x <= 1:
        raise ValueError("geom needs 0 < L <= U and x > 1")
    out = [L]
    while out[-1] < U:
        out.append(out[-1] * x)
    return out


def _dyadic_floor(v: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(floor(v * scale), scale)


def geom_dyadic(L, U, x, bits: int = 64) -> list:
    """Like :func:`geom` but each element is floored to ``bits`` fractional bits.

    Consecutive ratios stay within ``(1, x]``, so every value ``a`` in
    ``[min, U]`` still has a grid point ``g`` with ``a <= g <= a * x``, and the
    numbers stay small no matter how many elements there are.
    """
    L, U, x = as_fraction(L), as_fraction(U), as_fraction(x)
    if not (0 < L <= U) or x <= 1:
        raise ValueError("geom needs 0 < L <= U and x > 1")
    out = [L]
    while out[-1] < U:
        nxt = _dyadic_floor(out[-1] * x, bits)
        if nxt <= out[-1]:
            raise ValueError("grid precision too low for this ratio")
        out.append(nxt)
    return out


# --------------------------------------------------------------------------
# adaptive normalization


@dataclass(frozen=True)
class CapacityGrid:
    alphas: tuple
    rho: Fraction
    nbar: int
    alpha_min: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(sorted(as_fraction(a) for a in self.alphas)))
        object.__setattr__(self, "rho", as_fraction(self.rho))
        object.__setattr__(self, "alpha_min", as_fraction(self.alpha_min))
        if self.nbar < 1:
            raise ValueError("nbar must be >= 1")
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")

    @property
    def widths(self) -> tuple:
        c = self.rho / ((1 - self.rho) * self.nbar)
        return tuple(c * a for a in self.alphas)

    def gap_ok(self) -> bool:
        prev = self.alpha_min
        for a in self.alphas:
            if a - prev > self.rho * a:
                return False
            prev = a
        return True


def kpc_adaptive(items: Sequence[KpItem], grid: CapacityGrid, strict: bool = True) -> dict:
    """Solve the all-compressible knapsack for every capacity of ``grid`` at once.

    Pair sizes are normalized downward to the start of their subinterval, so
    the chosen set for capacity ``a`` may exceed ``a`` by up to ``nbar`` widths,
    which compression by ``rho`` absorbs. Profit is never below the exact
    optimum at ``a``.
    """
    if strict and not grid.gap_ok():
        raise ValueError("capacity grid violates the gap condition a_i - a_(i-1) <= rho * a_i")
    alphas = grid.alphas
    if not alphas:
        return {}
    widths = grid.widths
    lowers = (grid.alpha_min,) + alphas[:-1]
    top = alphas[-1]
    k = len(alphas)

    def normalize(s):
        if s < grid.alpha_min:
            return s
        i = bisect_right(alphas, s)
        if i >= k:
            i = k - 1
        u = widths[i]
        return max(floor(s / u) * u, lowers[i])

    # pairs: (normalized size, profit, true size, trace)
    pairs = [(Fraction(0), Fraction(0), 0, None)]
    for idx, it in enumerate(items):
        shifted = []
        for s, p, t, tr in pairs:
            ns = normalize(s + it.size)
            if ns <= top:
                shifted.append((ns, p + it.profit, t + it.size, (idx, tr)))
        if not shifted:
            continue
        shifted.sort(key=lambda e: (e[0], -e[1]))
        pairs = _merge(pairs, shifted)
    sizes = [e[0] for e in pairs]
    out = {}
    for a in alphas:
        j = bisect_right(sizes, a) - 1
        _, p, _, tr = pairs[j]
        out[a] = _result(items, p, tr)
    return out


# --------------------------------------------------------------------------
# knapsack with compressible items


def compressed_size(items: Sequence[KpItem], chosen, rho) -> Fraction:
    rho = as_fraction(rho)
    chosen = set(chosen)
    total = Fraction(0)
    for it in items:
        if it.id in chosen:
            total += (1 - rho) * it.size if it.compressible else it.size
    return total


def _tiebreak_key(res: KnapsackResult):
    return (-res.profit, res.size, sorted(map(str, res.items)))


def kpc_solve(items: Sequence[KpItem], capacity: int, rho, alpha_min, beta_max, nbar: Optional[int] = None) -> KnapsackResult:
    """Knapsack with compressible items.

    The returned set fits into ``capacity`` once its compressible items are
    compressed by ``2*rho - rho**2``, and its profit is at least the optimum of
    the plain (uncompressed) knapsack.
    """
    rho = as_fraction(rho)
    if not 0 < rho <= Fraction(1, 4):
        raise ValueError("rho must lie in (0, 1/4]")
    C = int(capacity)
    if C <= 0:
        return KnapsackResult(Fraction(0), (), Fraction(0))
    inc = [it for it in items if not it.compressible]
    comp = [it for it in items if it.compressible]
    beta_max = min(int(beta_max), C)
    amin = max(as_fraction(alpha_min), Fraction(C - beta_max))

    alphas = []
    if comp and 0 < amin <= C:
        if amin / (1 - rho) <= C:
            alphas = geom_dyadic(amin / (1 - rho), C, 1 / (1 - rho))
        else:
            alphas = [Fraction(C)]
    betas = {Fraction(0): Fraction(beta_max)}
    for a in alphas:
        betas[a] = C - (1 - rho) * a
    inc_res = kp_multi_capacity(inc, set(betas.values()))

    comp_res = {Fraction(0): KnapsackResult(Fraction(0), (), Fraction(0))}
    if alphas:
        smin = min(it.size for it in comp)
        sound = ceil(alphas[-1] / ((1 - rho) * smin))
        nb = len(comp) if nbar is None else max(int(nbar), sound)
        nb = max(1, min(nb, len(comp)))
        comp_res.update(kpc_adaptive(comp, CapacityGrid(tuple(alphas), rho, nb, amin)))

    best = None
    for a, cres in comp_res.items():
        ires = inc_res[betas[a]]
        chosen = set(cres.items) | set(ires.items)
        cand = KnapsackResult(
            cres.profit + ires.profit,
            tuple(it.id for it in items if it.id in chosen),
            cres.size + ires.size,
        )
        if best is None or _tiebreak_key(cand) < _tiebreak_key(best):
            best = cand
    return best


# --------------------------------------------------------------------------
# bounded knapsack


class Container(NamedTuple):
    type: int
    mult: int
    size: int
    profit: Fraction
    compressible: bool = False

    def item(self, key=None) -> KpItem:
        return KpItem(key if key is not None else (self.type, self.mult), self.size, self.profit, self.compressible)


def bounded_kp_expand(types: Sequence) -> list:
    """Binary splitting of ``(size, profit, count[, compressible])`` types into containers."""
    out = []
    for t, entry in enumerate(types):
        size, profit, count = entry[0], as_fraction(entry[1]), int(entry[2])
        comp = bool(entry[3]) if len(entry) > 3 else False
        if count < 0:
            raise ValueError("negative item count")
        mult = 1
        left = count
        while left > 0:
            take = min(mult, left)
            out.append(Container(t, take, take * size, take * profit, comp))
            left -= take
            mult *= 2
    return out
