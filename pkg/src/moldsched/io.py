"""Instance and schedule JSON files."""

from __future__ import annotations

import json
from pathlib import Path

from .model import Instance, Job, Schedule, as_fraction, oracle_from_json


def instance_from_dict(d: dict) -> Instance:
    if "m" not in d or "jobs" not in d:
        raise ValueError('instance JSON needs "m" and "jobs"')
    jobs = [Job(str(j["id"]), oracle_from_json(j["oracle"])) for j in d["jobs"]]
    return Instance(tuple(jobs), int(d["m"]))


def instance_to_dict(inst: Instance) -> dict:
    return {"m": inst.m, "jobs": [{"id": j.id, "oracle": j.oracle.to_json()} for j in inst.jobs]}


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def dump_instance(inst: Instance, path=None) -> str:
    text = json.dumps(instance_to_dict(inst), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def schedule_from_dict(inst: Instance, d: dict) -> Schedule:
    entries = d["jobs"] if "jobs" in d else d
    return Schedule.build(
        inst, {jid: (as_fraction(e["start"]), int(e["procs"])) for jid, e in entries.items()}
    )


def load_schedule(inst: Instance, path) -> Schedule:
    with open(path) as fh:
        return schedule_from_dict(inst, json.load(fh))
