"""Command line interface: ``moldsched <command> ...``.

Exit codes: 0 success, 1 bad input, 2 a solver broke one of its guarantees.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import bench
from .estimator import ContractViolation, estimate
from .generators import FAMILIES, TrivialNo, gen_four_partition, gen_random_monotone
from .io import dump_instance, load_instance, load_schedule
from .knapsack import KpItem, compressed_size, kp_exact, kpc_solve
from .model import MonotonyError, as_fraction, fmt, validate_monotone, validate_schedule
from .oracle import opt_makespan
from .solver import ALGOS, solve


class InputError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("MOLDSCHED_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"MOLDSCHED_SEED must be an integer, got {raw!r}")


def read_instance(path):
    inst = load_instance(path)
    for j in inst.jobs:
        chk = validate_monotone(j, inst.m)
        if not chk:
            raise MonotonyError(f"job {j.id}: {chk.detail}")
    return inst


def emit(text, out=None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_validate(args):
    inst = read_instance(args.instance)
    if args.schedule:
        s = load_schedule(inst, args.schedule)
        chk = validate_schedule(s, inst)
        if not chk:
            print(f"invalid schedule: {chk.detail}", file=sys.stderr)
            return 1
        print(f"ok makespan={fmt(chk.makespan)}")
    else:
        print(f"ok n={inst.n} m={inst.m}")
    return 0


def cmd_estimate(args):
    inst = read_instance(args.instance)
    est = estimate(inst)
    print(f"omega={fmt(est.omega)}")
    print(json.dumps({"omega": fmt(est.omega), "allotment": est.allotment}, indent=2))
    return 0


def cmd_solve(args):
    inst = read_instance(args.instance)
    sol = solve(inst, args.algo, as_fraction(args.eps))
    emit(json.dumps(sol.schedule.to_json(), indent=2), args.out)
    ratio = sol.makespan / sol.omega
    print(
        f"makespan={fmt(sol.makespan)} lower_bound={fmt(sol.omega)} "
        f"ratio_vs_lb={float(ratio):.6f} algo={sol.algo}",
        file=sys.stderr,
    )
    return 0


def cmd_oracle(args):
    inst = read_instance(args.instance)
    opt, sched = opt_makespan(inst)
    print(f"opt={fmt(opt)}")
    emit(json.dumps(sched.to_json(), indent=2), args.out)
    return 0


def cmd_gen(args):
    if args.kind == "fourpartition":
        res = gen_four_partition(args.numbers, args.B)
        if isinstance(res, TrivialNo):
            print(f"trivial no-instance: {res.reason}", file=sys.stderr)
            return 0
        emit(dump_instance(res.instance), args.out)
        print(f"d={fmt(res.d)}", file=sys.stderr)
        return 0
    seed = args.seed if args.seed is not None else default_seed()
    inst = gen_random_monotone(args.n, args.m, args.family, seed)
    emit(dump_instance(inst), args.out)
    return 0


def cmd_bench(args):
    seed = args.seed if args.seed is not None else default_seed()
    cases = bench.SUITES[args.suite]
    rows = bench.run_suite(cases, args.algo, as_fraction(args.eps), seed, args.threads)
    bench.write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    figure = args.figure or os.path.splitext(args.out)[0] + ".png"
    from .plotting import bench_figure

    bench_figure(rows, figure)
    print(f"wrote figure {figure}", file=sys.stderr)
    return 0


def cmd_kpc_selftest(args):
    rng = random.Random(args.seed if args.seed is not None else default_seed())
    bad = 0
    for _ in range(args.trials):
        n = rng.randint(0, 12)
        C = rng.randint(0, 60)
        rho = rng.choice([Fraction(1, 4), Fraction(1, 6), Fraction(1, 8)])
        amin = rng.randint(1, 8)
        items = []
        for i in range(n):
            comp = rng.random() < 0.5
            size = rng.randint(amin, 30) if comp else rng.randint(1, 30)
            items.append(KpItem(i, size, rng.randint(0, 20), comp))
        res = kpc_solve(items, C, rho, amin, C, rng.randint(1, 4))
        exact = kp_exact(items, C).profit
        if res.profit < exact or compressed_size(items, res.items, 2 * rho - rho * rho) > C:
            bad += 1
    print(f"kpc-selftest trials={args.trials} violations={bad}")
    return 2 if bad else 0


def build_parser():
    p = argparse.ArgumentParser(prog="moldsched", description="Makespan scheduling of monotone moldable jobs.")
    sub = p.add_subparsers(dest="cmd", required=True, metavar="command")

    v = sub.add_parser("validate", help="check an instance (and optionally a schedule)")
    v.add_argument("instance")
    v.add_argument("--schedule")
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("estimate", help="print the lower bound omega and its allotment")
    e.add_argument("instance")
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("solve", help="compute a schedule")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGOS, default="auto")
    s.add_argument("--eps", default="1/2")
    s.add_argument("--out", help="write schedule JSON here instead of stdout")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exact optimum for tiny instances")
    o.add_argument("instance")
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="generate an instance")
    gs = g.add_subparsers(dest="kind", required=True)
    fp = gs.add_parser("fourpartition")
    fp.add_argument("--numbers", type=int, nargs="+", required=True)
    fp.add_argument("--B", type=int, required=True)
    fp.add_argument("--out")
    rnd = gs.add_parser("random")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--m", type=int, required=True)
    rnd.add_argument("--family", choices=FAMILIES, default="mixed")
    rnd.add_argument("--seed", type=int)
    rnd.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run a benchmark suite, write CSV and a figure")
    b.add_argument("--suite", choices=sorted(bench.SUITES), default="smoke")
    b.add_argument("--algo", choices=ALGOS, default="auto")
    b.add_argument("--eps", default="3/10")
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--seed", type=int)
    b.add_argument("--out", default="bench.csv")
    b.add_argument("--figure", help="PNG path for the figure (default: next to the CSV)")
    b.set_defaults(func=cmd_bench)

    k = sub.add_parser("kpc-selftest")
    # hidden: keep it out of the command list
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "kpc-selftest"]
    k.add_argument("--trials", type=int, default=200)
    k.add_argument("--seed", type=int)
    k.set_defaults(func=cmd_kpc_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 2
    except (InputError, ValueError, KeyError, IndexError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
