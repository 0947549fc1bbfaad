import random
from functools import lru_cache
from fractions import Fraction

import pytest

from moldsched.generators import gen_random_monotone
from moldsched.model import Instance, Job, TableOracle
from moldsched.oracle import opt_makespan

FAMS = ("power", "capped", "table", "mixed")


def table_instance(tables, m=None):
    m = m if m is not None else len(tables[0])
    return Instance([Job(f"j{i}", TableOracle(t)) for i, t in enumerate(tables)], m)


@lru_cache(maxsize=None)
def oracle_suite(count, seed, max_n=6, max_m=8):
    """Random instances paired with their exact optimum."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_n)
        m = rng.randint(1, max_m)
        inst = gen_random_monotone(n, m, FAMS[i % len(FAMS)], rng.randrange(10**9))
        opt, _ = opt_makespan(inst)
        out.append((inst, opt))
    return out


@lru_cache(maxsize=None)
def fptas_suite(count, seed, eps=Fraction(1, 2)):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, 4)
        m = int(-(-8 * n // eps))
        inst = gen_random_monotone(n, m, FAMS[i % len(FAMS)], rng.randrange(10**9))
        opt, _ = opt_makespan(inst)
        out.append((inst, opt))
    return out


@pytest.fixture(scope="session")
def small_suite():
    return oracle_suite(60, 2024)


def overflow_case(rng):
    """A two-shelf assignment of big jobs whose S2 needs more than m processors
    while the total work stays within m*d. Returns None when a draw misses."""
    from moldsched.shelves import ShelfAssignment

    m = rng.randint(3, 24)
    n = rng.randint(3, 14)
    inst = gen_random_monotone(n, m, rng.choice(FAMS), rng.randrange(10**9))
    jobs = {j.id: j for j in inst.jobs}
    lo = max(2 * j.oracle.time(m) for j in inst.jobs)
    hi = 2 * min(j.oracle.time(1) for j in inst.jobs)
    if lo >= hi:
        return None
    d = lo + (hi - lo) * Fraction(rng.randint(0, 100), 100)
    if hi <= d:
        return None
    sh = ShelfAssignment(d, m)
    for j in inst.jobs:
        k1 = j.oracle.gamma(d, m)
        if rng.random() < 0.4 and sh.p1 + k1 <= m:
            sh.s1[j.id] = k1
        else:
            k2 = j.oracle.gamma(d / 2, m)
            if k2 is None:
                return None
            sh.s2[j.id] = k2
    if sh.p2 <= m or sh.work(jobs) > m * d:
        return None
    return inst, sh, jobs


@lru_cache(maxsize=None)
def overflow_suite(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        case = overflow_case(rng)
        if case:
            out.append(case)
    return out
