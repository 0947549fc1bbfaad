import random
from fractions import Fraction as F

import pytest

from moldsched.generators import FAMILIES, TrivialNo, gen_four_partition, gen_random_monotone
from moldsched.model import PowerOracle, ptime, validate_monotone, work
from moldsched.oracle import opt_makespan


def test_four_partition_n1():
    fp = gen_four_partition([3, 3, 3, 3], 12)
    inst = fp.instance
    assert inst.m == 1 and inst.n == 4 and fp.d == 12
    assert all(ptime(j, 1) == 3 for j in inst.jobs)
    assert opt_makespan(inst)[0] == 12


def test_four_partition_n2():
    fp = gen_four_partition([3] * 8, 12)
    inst = fp.instance
    assert inst.m == 2 and fp.d == 24
    assert all(ptime(j, k) == 7 - k for j in inst.jobs for k in (1, 2))
    assert opt_makespan(inst)[0] == 24


def test_four_partition_trivial_no_and_errors():
    assert isinstance(gen_four_partition([3, 3, 3, 3], 13), TrivialNo)
    with pytest.raises(ValueError):
        gen_four_partition([3, 3, 3], 12)
    with pytest.raises(ValueError):
        gen_four_partition([2, 3, 3, 4], 12)


def test_four_partition_scaling_to_two():
    fp = gen_four_partition([1, 1, 1, 1], 4)
    assert min(fp.numbers) >= 2 and fp.B == 8 and fp.d == 8


@pytest.mark.parametrize("nums,B", [([3, 3, 3, 3], 12), ([3] * 8, 12), ([5, 5, 5, 7, 5, 5, 6, 6], 22)])
def test_reduction_work_strictly_increasing(nums, B):
    fp = gen_four_partition(nums, B)
    m = fp.instance.m
    for j in fp.instance.jobs:
        for k in range(1, m):
            assert work(j, k + 1, m) > work(j, k, m)


def test_random_is_reproducible():
    for fam in FAMILIES:
        a = gen_random_monotone(5, 12, fam, 42)
        b = gen_random_monotone(5, 12, fam, 42)
        assert a == b


def test_thousand_samples_are_monotone():
    rng = random.Random(0)
    for i in range(1000):
        m = rng.randint(1, 64)
        inst = gen_random_monotone(1, m, FAMILIES[i % 4], rng.randrange(10**9))
        assert all(validate_monotone(j, m) for j in inst.jobs)


def test_theta_zero_constant_time():
    o = PowerOracle(7, 0)
    assert {o.time(k) for k in range(1, 50)} == {F(7)}
