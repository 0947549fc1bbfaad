"""Top-level solvers: binary search around the dual algorithms."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .estimator import ContractViolation, dual_to_approx, estimate
from .fptas import clamp_eps, fptas_applicable, fptas_dual
from .model import Instance, Schedule, validate_schedule
from .shelves import mrt_dual

ALGOS = ("auto", "fptas", "mrt-simple", "mrt-bounded", "mrt-linear")


class Solution(NamedTuple):
    schedule: Schedule
    omega: Fraction  # lower bound on OPT
    algo: str  # the algorithm that actually ran

    @property
    def makespan(self) -> Fraction:
        return self.schedule.makespan


def solve(inst: Instance, algo: str = "auto", eps=Fraction(1, 2)) -> Solution:
    """Makespan within (1+eps) OPT for ``fptas``, (3/2+eps) OPT for the shelf variants.

    The error budget is split in half between the dual algorithm and the
    binary search. ``auto`` picks the FPTAS whenever it applies.
    """
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGOS}")
    eps = clamp_eps(eps)
    half = eps / 2
    est = estimate(inst)
    if algo == "auto":
        algo = "fptas" if fptas_applicable(inst, half) else "mrt-bounded"
    if algo == "fptas":
        if not fptas_applicable(inst, half):
            raise ValueError(f"fptas needs m >= 16n/eps (m={inst.m}, n={inst.n}, eps={eps})")
        sched = dual_to_approx(inst, half, lambda d: fptas_dual(inst, d, half), 1 + half, est)
    else:
        variant = algo.split("-", 1)[1]
        sched = dual_to_approx(inst, half, lambda d: mrt_dual(inst, d, half, variant), Fraction(3, 2) + half, est)
    ok = validate_schedule(sched, inst)
    if not ok:
        raise ContractViolation(f"solver produced an invalid schedule: {ok.detail}")
    return Solution(sched, est.omega, algo)


def solve_auto(inst: Instance, eps=Fraction(1, 2)) -> Schedule:
    return solve(inst, "auto", eps).schedule
