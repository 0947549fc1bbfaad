import random
from fractions import Fraction as F
from itertools import permutations, product

import pytest

from moldsched.generators import gen_four_partition, gen_random_monotone
from moldsched.model import Schedule, list_schedule, validate_schedule
from moldsched.oracle import OracleTooLarge, opt_makespan

from conftest import FAMS, table_instance


def test_single_job_runs_on_all_processors():
    inst = table_instance([[9, 5, 4, F(7, 2)]])
    opt, s = opt_makespan(inst)
    assert opt == F(7, 2) and validate_schedule(s, inst)


def test_four_partition_n2():
    fp = gen_four_partition([3] * 8, 12)
    opt, s = opt_makespan(fp.instance)
    assert opt == 24 and validate_schedule(s, fp.instance)


def test_two_small_tables():
    # serial at k=2 gives 6, side by side at k=1 gives 4
    inst = table_instance([[4, 3], [4, 3]])
    assert opt_makespan(inst)[0] == 4


def test_size_guard():
    with pytest.raises(OracleTooLarge):
        opt_makespan(gen_random_monotone(9, 4, "power", 0))
    with pytest.raises(OracleTooLarge):
        opt_makespan(gen_random_monotone(2, 65, "power", 0))


def all_list_schedules(inst):
    """Every allotment and every job order through the list scheduler."""
    ids = [j.id for j in inst.jobs]
    best = None
    for ks in product(range(1, inst.m + 1), repeat=inst.n):
        allot = dict(zip(ids, ks))
        for order in permutations(ids):
            s = list_schedule(inst, allot, order)
            best = s.makespan if best is None else min(best, s.makespan)
    return best


def test_never_worse_than_any_list_schedule():
    rng = random.Random(2)
    for i in range(40):
        inst = gen_random_monotone(rng.randint(1, 4), rng.randint(1, 4), FAMS[i % 4], rng.randrange(10**6))
        opt, s = opt_makespan(inst)
        assert validate_schedule(s, inst) and s.makespan == opt
        assert opt <= all_list_schedules(inst)


def test_random_feasible_schedules_never_beat_the_oracle():
    rng = random.Random(6)
    for i in range(40):
        inst = gen_random_monotone(rng.randint(1, 5), rng.randint(1, 6), FAMS[i % 4], rng.randrange(10**6))
        opt, _ = opt_makespan(inst)
        for _ in range(30):
            # random allotments and random (possibly delayed) starts on a coarse grid
            entries = {}
            for j in inst.jobs:
                entries[j.id] = (F(rng.randint(0, 20), 2), rng.randint(1, inst.m))
            s = Schedule.build(inst, entries)
            if validate_schedule(s, inst):
                assert s.makespan >= opt
