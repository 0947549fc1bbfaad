"""(1+eps)-dual algorithm for instances with many processors (m >= 8n/eps)."""

from __future__ import annotations

from fractions import Fraction

from .estimator import Accepted, Rejected
from .model import Instance, Placement, Schedule, as_fraction


def clamp_eps(eps) -> Fraction:
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return min(eps, Fraction(1))


def fptas_applicable(inst: Instance, eps) -> bool:
    return inst.m * clamp_eps(eps) >= 8 * inst.n


def fptas_dual(inst: Instance, d, eps):
    """Give every job gamma((1+eps)d) processors and start everything at 0."""
    eps = clamp_eps(eps)
    d = as_fraction(d)
    if not fptas_applicable(inst, eps):
        raise ValueError(f"fptas needs m >= 8n/eps (m={inst.m}, n={inst.n}, eps={eps})")
    if d <= 0:
        return Rejected("non-positive deadline")
    t = (1 + eps) * d
    total = 0
    out = {}
    for j in inst.jobs:
        k = j.oracle.gamma(t, inst.m)
        if k is None:
            return Rejected(f"job {j.id} cannot finish by {t}")
        total += k
        if total > inst.m:
            return Rejected("allotment exceeds m")
        out[j.id] = Placement(Fraction(0), k, j.oracle.time(k))
    return Accepted(Schedule(out))
