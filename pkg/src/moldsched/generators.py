"""Instance factories: the 4-Partition reduction and seeded random monotone jobs."""

from __future__ import annotations

import random
from fractions import Fraction
from math import ceil
from typing import NamedTuple

from .model import CappedOracle, Instance, Job, PowerOracle, ReductionOracle, TableOracle

FAMILIES = ("power", "capped", "table", "mixed")
TABLE_MAX_M = 4096


class FourPartition(NamedTuple):
    instance: Instance
    d: Fraction
    numbers: tuple  # after scaling
    B: int


class TrivialNo(NamedTuple):
    """Marker for inputs that are no-instances for arithmetic reasons alone."""

    reason: str


def gen_four_partition(numbers, B):
    nums = [int(a) for a in numbers]
    B = int(B)
    if not nums or len(nums) % 4:
        raise ValueError("need 4n numbers")
    n = len(nums) // 4
    for a in nums:
        if not (5 * a > B and 3 * a < B):
            raise ValueError(f"number {a} not strictly between B/5 and B/3")
    if sum(nums) != n * B:
        return TrivialNo(f"sum {sum(nums)} != n*B = {n * B}")
    # the job shape needs a >= 2
    if min(nums) < 2:
        f = ceil(2 / min(nums))
        nums = [a * f for a in nums]
        B *= f
    m = n
    jobs = [Job(f"a{i}", ReductionOracle(a, m)) for i, a in enumerate(nums)]
    return FourPartition(Instance(jobs, m), Fraction(n * B), tuple(nums), B)


def _random_table(rng: random.Random, m: int) -> TableOracle:
    t = [rng.randint(1, 100)]
    for k in range(2, m + 1):
        prev = t[-1]
        x = rng.randint(1, prev)
        # raise time until work is monotone; stays <= prev
        x = max(x, -(-(k - 1) * prev // k))
        t.append(x)
    return TableOracle(tuple(t))


def random_job(rng: random.Random, jid: str, m: int, family: str) -> Job:
    if family == "mixed":
        fams = ["power", "capped"] + (["table"] if m <= TABLE_MAX_M else [])
        family = rng.choice(fams)
    if family == "power":
        o = PowerOracle(rng.randint(1, 100), Fraction(rng.randint(0, 1000), 1000))
    elif family == "capped":
        o = CappedOracle(rng.randint(1, 100), rng.randint(1, m))
    elif family == "table":
        if m > TABLE_MAX_M:
            raise ValueError(f"table family limited to m <= {TABLE_MAX_M}")
        o = _random_table(rng, m)
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return Job(jid, o)


def gen_random_monotone(n: int, m: int, family: str = "mixed", seed=0) -> Instance:
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    rng = random.Random(seed)
    return Instance([random_job(rng, f"j{i}", m, family) for i in range(n)], m)
