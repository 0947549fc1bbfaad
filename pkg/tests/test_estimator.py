from fractions import Fraction as F
from math import ceil, log2

import pytest

from moldsched.estimator import Accepted, ContractViolation, Rejected, dual_to_approx, estimate
from moldsched.generators import gen_four_partition
from moldsched.model import Instance, Job, PowerOracle, list_schedule, ptime, validate_schedule, work
from moldsched.oracle import opt_makespan

from conftest import oracle_suite, table_instance


def brute_omega(inst):
    """min over thresholds of max(W/m, t), scanning every breakpoint."""
    pts = sorted({j.oracle.time(k) for j in inst.jobs for k in range(1, inst.m + 1)})
    best = None
    for t in pts:
        ks = [j.oracle.gamma(t, inst.m) for j in inst.jobs]
        if None in ks:
            continue
        w = sum(k * j.oracle.time(k) for j, k in zip(inst.jobs, ks))
        v = max(w / inst.m, t)
        best = v if best is None else min(best, v)
    return best


def test_single_table_example():
    est = estimate(table_instance([[4, 3]]))
    assert est.omega == 3 and est.allotment == {"j0": 2}


def test_single_job_specializes_definition():
    for times in ([9, 5, 4], [7, 7, 7], [12, 6, 4, 3], [10, 9, 8, 7]):
        inst = table_instance([times])
        m = len(times)
        assert estimate(inst).omega == min(max(k * times[k - 1] / F(m), times[k - 1]) for k in range(1, m + 1))


def test_four_partition_lower_bound():
    fp = gen_four_partition([3] * 8, 12)
    assert estimate(fp.instance).omega <= 24 == fp.d


def test_matches_breakpoint_scan():
    for inst, _ in oracle_suite(60, 7):
        assert estimate(inst).omega == brute_omega(inst)


def test_sandwich_and_list_schedule(small_suite):
    for inst, opt in small_suite:
        est = estimate(inst)
        assert est.omega <= opt <= 2 * est.omega
        s = list_schedule(inst, est.allotment)
        assert validate_schedule(s, inst)
        assert s.makespan <= 2 * est.omega


def test_parametric_matches_scan_at_larger_m():
    inst = Instance([Job(f"p{i}", PowerOracle(1000 + 37 * i, F(i % 5, 5))) for i in range(6)], 2**11)
    est = estimate(inst)
    assert est.omega == brute_omega(inst)
    W = sum(work(j, est.allotment[j.id], inst.m) for j in inst.jobs)
    T = max(ptime(j, est.allotment[j.id], inst.m) for j in inst.jobs)
    assert max(W / inst.m, T) <= est.omega


# ---------------------------------------------------------------- dual_to_approx


def exact_dual(inst, opt, sched):
    def dual(d):
        return Accepted(sched) if opt <= d else Rejected("below OPT")

    return dual


@pytest.mark.parametrize("eps", [F(1, 10), F(1, 2), F(1)])
def test_exact_dual_gives_one_plus_eps(small_suite, eps):
    for inst, opt in small_suite[:20]:
        _, sched = opt_makespan(inst)
        calls = []

        def dual(d, inner=exact_dual(inst, opt, sched)):
            calls.append(d)
            return inner(d)

        out = dual_to_approx(inst, eps, dual)
        assert out.makespan <= (1 + eps) * opt
        assert len(calls) <= ceil(log2(1 / eps)) + 2


def test_rejecting_dual_is_a_contract_violation():
    inst = table_instance([[4, 3]])
    with pytest.raises(ContractViolation):
        dual_to_approx(inst, F(1, 2), lambda d: Rejected("always"))


def test_result_truthiness():
    assert not Rejected("x")
    assert Accepted(None)
