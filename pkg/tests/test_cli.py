import csv
import json
from fractions import Fraction as F

import pytest

from moldsched.cli import main
from moldsched.generators import gen_random_monotone
from moldsched.io import dump_instance, load_instance
from moldsched.oracle import opt_makespan


@pytest.fixture
def inst_file(tmp_path):
    inst = gen_random_monotone(4, 6, "mixed", 3)
    p = tmp_path / "inst.json"
    dump_instance(inst, p)
    return p, inst


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok(inst_file, capsys):
    p, inst = inst_file
    code, out, _ = run(["validate", p], capsys)
    assert code == 0 and f"n={inst.n}" in out


def test_validate_broken_table_names_k(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"m": 4, "jobs": [{"id": "x", "oracle": {"kind": "table", "times": [9, 5, 3, "5/2"]}}]}))
    code, _, err = run(["validate", p], capsys)
    assert code == 1 and "k=3" in err


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(["validate", p], capsys)[0] == 1
    assert run(["validate", tmp_path / "missing.json"], capsys)[0] == 1


def test_bad_eps(inst_file, capsys):
    p, _ = inst_file
    assert run(["solve", p, "--eps", "0"], capsys)[0] == 1
    assert run(["solve", p, "--eps", "abc"], capsys)[0] == 1


def test_solve_auto_ratio_and_round_trip(inst_file, tmp_path, capsys):
    p, inst = inst_file
    sched = tmp_path / "s.json"
    code, _, err = run(["solve", p, "--algo", "auto", "--eps", "0.5", "--out", sched], capsys)
    assert code == 0
    fields = dict(kv.split("=") for kv in err.split())
    opt, _ = opt_makespan(inst)
    assert F(fields["makespan"]) <= 2 * opt
    assert float(fields["ratio_vs_lb"]) > 0
    code, out, _ = run(["validate", p, "--schedule", sched], capsys)
    assert code == 0 and out.startswith("ok makespan=")


@pytest.mark.parametrize("algo", ["mrt-simple", "mrt-bounded", "mrt-linear"])
def test_every_algo_schedule_revalidates(inst_file, tmp_path, capsys, algo):
    p, _ = inst_file
    code, out, _ = run(["solve", p, "--algo", algo], capsys)
    assert code == 0
    sched = tmp_path / "s.json"
    sched.write_text(out)
    assert run(["validate", p, "--schedule", sched], capsys)[0] == 0


def test_invalid_schedule_exit_1(inst_file, tmp_path, capsys):
    p, inst = inst_file
    sched = tmp_path / "s.json"
    sched.write_text(json.dumps({"jobs": {j.id: {"start": "0", "procs": inst.m} for j in inst.jobs}}))
    code, _, err = run(["validate", p, "--schedule", sched], capsys)
    assert code == 1 and "invalid" in err


def test_estimate_and_oracle(inst_file, capsys):
    p, inst = inst_file
    code, out, _ = run(["estimate", p], capsys)
    assert code == 0 and out.startswith("omega=")
    code, out, _ = run(["oracle", p], capsys)
    assert code == 0 and F(out.split()[0].split("=")[1]) == opt_makespan(inst)[0]


def test_gen_commands(tmp_path, capsys):
    out = tmp_path / "fp.json"
    code, _, err = run(["gen", "fourpartition", "--numbers", *[3] * 8, "--B", 12, "--out", out], capsys)
    assert code == 0 and "d=24" in err and load_instance(out).m == 2
    code, _, err = run(["gen", "fourpartition", "--numbers", 3, 3, 3, 3, "--B", 13], capsys)
    assert code == 0 and "trivial" in err
    code, _, _ = run(["gen", "fourpartition", "--numbers", 1, 3, 3, 3, "--B", 12], capsys)
    assert code == 1
    a = run(["gen", "random", "--n", 3, "--m", 5, "--seed", 9], capsys)[1]
    b = run(["gen", "random", "--n", 3, "--m", 5, "--seed", 9], capsys)[1]
    assert a == b and json.loads(a)["m"] == 5


def test_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("MOLDSCHED_SEED", "5")
    a = run(["gen", "random", "--n", 3, "--m", 5], capsys)[1]
    assert a == run(["gen", "random", "--n", 3, "--m", 5, "--seed", 5], capsys)[1]
    monkeypatch.setenv("MOLDSCHED_SEED", "five")
    assert run(["gen", "random", "--n", 3, "--m", 5], capsys)[0] == 1


def test_bench_writes_csv_and_figure(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, _, _ = run(["bench", "--suite", "smoke", "--threads", 2, "--out", out], capsys)
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert rows and list(rows[0])[:8] == ["n", "m", "eps", "algo", "makespan", "lower_bound", "ratio_vs_lb", "wall_time"]
    assert all(float(r["ratio_vs_lb"]) >= 1 for r in rows)
    assert (tmp_path / "b.png").stat().st_size > 0


def test_contract_violation_exit_2(inst_file, capsys, monkeypatch):
    from moldsched import cli
    from moldsched.estimator import ContractViolation

    def broken(*a, **k):
        raise ContractViolation("dual rejected everything")

    monkeypatch.setattr(cli, "solve", broken)
    p, _ = inst_file
    assert run(["solve", p], capsys)[0] == 2


def test_kpc_selftest_hidden(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "kpc-selftest" not in capsys.readouterr().out
    assert main(["kpc-selftest", "--trials", "50"]) == 0
