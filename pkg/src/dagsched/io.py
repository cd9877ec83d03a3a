"""File formats: JSON envelopes for task graphs, resource lists and results.

Every file is one JSON object carrying format_version and kind plus the
body fields. Loading is strict about types but preserves unknown fields,
so third-party annotations survive a round-trip. Saving is canonical
(fixed key order, sorted unknown keys, two-space indent, trailing
newline): after one load/save normalization pass, files are byte-stable.
"""

from __future__ import annotations

import json
from typing import Any

from .broker import ExperimentResult
from .dag import DagApp, DagStructureError, DependencyEdge, TaskNode
from .errors import ParseError
from .grid import ResourceSpec
from .scheduler import SchedulePlan

FORMAT_VERSION = 1

_TASK_KEYS = ("id", "name", "length_mi", "x", "y")
_EDGE_KEYS = ("src", "dst", "bytes")
_RESOURCE_KEYS = ("name", "architecture", "time_zone", "num_machines",
                  "pes_per_machine", "pe_rating_mips", "baud_rate_bps",
                  "cost_per_sec")


def _reject_constant(name):
    raise ParseError(f"non-finite number {name} is not allowed")


def parse_json(text: str, where: str) -> Any:
    if not text.strip():
        raise ParseError(f"{where}: empty input")
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"{where}:{e.lineno}:{e.colno}: {e.msg}") from None


def _obj(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{where}: expected an object")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array")
    return value


def _req(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing required field {key!r}")
    return obj[key]


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer")
    return value


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number")
    return float(value)


def _str(value, where: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"{where}: expected a string")
    return value


def _check_envelope(doc: dict, kind: str, where: str) -> None:
    version = _req(doc, "format_version", where)
    if isinstance(version, bool) or not isinstance(version, int):
        raise ParseError(f"{where}: format_version must be an integer")
    if version != FORMAT_VERSION:
        raise ParseError(
            f"{where}: unsupported format_version {version}; this build "
            f"reads version {FORMAT_VERSION}")
    found = _req(doc, "kind", where)
    if found != kind:
        raise ParseError(f"{where}: expected kind {kind!r}, found {found!r}")


def _extras(obj: dict, known: tuple) -> dict:
    return {k: v for k, v in obj.items() if k not in known}


# ---------------------------------------------------------------- task graphs

def dag_from_jsonable(value, where: str = "dag") -> DagApp:
    doc = _obj(value, where)
    _check_envelope(doc, "dag", where)
    name = _str(_req(doc, "name", where), f"{where}.name")

    tasks = []
    for i, item in enumerate(_list(_req(doc, "tasks", where), f"{where}.tasks")):
        w = f"{where}.tasks[{i}]"
        t = _obj(item, w)
        x = t.get("x")
        y = t.get("y")
        tasks.append(TaskNode(
            id=_int(_req(t, "id", w), f"{w}.id"),
            name=_str(_req(t, "name", w), f"{w}.name"),
            length_mi=_num(_req(t, "length_mi", w), f"{w}.length_mi"),
            x=None if x is None else _num(x, f"{w}.x"),
            y=None if y is None else _num(y, f"{w}.y"),
            extra=_extras(t, _TASK_KEYS),
        ))

    edges = []
    for i, item in enumerate(_list(_req(doc, "edges", where), f"{where}.edges")):
        w = f"{where}.edges[{i}]"
        e = _obj(item, w)
        edges.append(DependencyEdge(
            src=_int(_req(e, "src", w), f"{w}.src"),
            dst=_int(_req(e, "dst", w), f"{w}.dst"),
            bytes=_num(_req(e, "bytes", w), f"{w}.bytes"),
            extra=_extras(e, _EDGE_KEYS),
        ))

    extra = _extras(doc, ("format_version", "kind", "name", "tasks", "edges"))
    try:
        return DagApp(name, tasks, edges, extra=extra)
    except DagStructureError as exc:
        raise ParseError(f"{where}: {exc}") from None


def dag_to_jsonable(dag: DagApp) -> dict:
    doc: dict = {"format_version": FORMAT_VERSION, "kind": "dag",
                 "name": dag.name}
    tasks = []
    for t in dag.tasks:
        td: dict = {"id": t.id, "name": t.name, "length_mi": t.length_mi}
        if t.x is not None:
            td["x"] = t.x
        if t.y is not None:
            td["y"] = t.y
        for k in sorted(t.extra):
            td[k] = t.extra[k]
        tasks.append(td)
    doc["tasks"] = tasks
    edges = []
    for e in dag.edges:
        ed: dict = {"src": e.src, "dst": e.dst, "bytes": e.bytes}
        for k in sorted(e.extra):
            ed[k] = e.extra[k]
        edges.append(ed)
    doc["edges"] = edges
    for k in sorted(dag.extra):
        doc[k] = dag.extra[k]
    return doc


def load_dag(path) -> DagApp:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return dag_from_jsonable(parse_json(text, str(path)), where=str(path))


def save_dag(dag: DagApp, path) -> None:
    save_json(dag_to_jsonable(dag), path)


# ------------------------------------------------------------- resource lists

def resources_from_jsonable(value, where: str = "resources") -> list:
    doc = _obj(value, where)
    _check_envelope(doc, "resources", where)
    specs = []
    for i, item in enumerate(_list(_req(doc, "resources", where),
                                   f"{where}.resources")):
        w = f"{where}.resources[{i}]"
        r = _obj(item, w)
        specs.append(ResourceSpec(
            name=_str(_req(r, "name", w), f"{w}.name"),
            num_machines=_int(_req(r, "num_machines", w),
                              f"{w}.num_machines"),
            pes_per_machine=_int(_req(r, "pes_per_machine", w),
                                 f"{w}.pes_per_machine"),
            pe_rating_mips=_num(_req(r, "pe_rating_mips", w),
                                f"{w}.pe_rating_mips"),
            baud_rate_bps=_num(_req(r, "baud_rate_bps", w),
                               f"{w}.baud_rate_bps"),
            cost_per_sec=_num(_req(r, "cost_per_sec", w),
                              f"{w}.cost_per_sec"),
            architecture=_str(r["architecture"], f"{w}.architecture")
            if "architecture" in r else "generic",
            time_zone=_num(r["time_zone"], f"{w}.time_zone")
            if "time_zone" in r else 0.0,
            extra=_extras(r, _RESOURCE_KEYS),
        ))
    return specs


def resources_to_jsonable(specs: list) -> dict:
    doc: dict = {"format_version": FORMAT_VERSION, "kind": "resources"}
    records = []
    for s in specs:
        rd: dict = {"name": s.name, "architecture": s.architecture,
                    "time_zone": s.time_zone, "num_machines": s.num_machines,
                    "pes_per_machine": s.pes_per_machine,
                    "pe_rating_mips": s.pe_rating_mips,
                    "baud_rate_bps": s.baud_rate_bps,
                    "cost_per_sec": s.cost_per_sec}
        for k in sorted(s.extra):
            rd[k] = s.extra[k]
        records.append(rd)
    doc["resources"] = records
    return doc


def load_resources(path) -> list:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return resources_from_jsonable(parse_json(text, str(path)),
                                   where=str(path))


def save_resources(specs: list, path) -> None:
    save_json(resources_to_jsonable(specs), path)


# ------------------------------------------------------------------- results

def plan_to_jsonable(plan: SchedulePlan) -> dict:
    return {
        "assignments": [
            {"task": a.task, "resource": a.resource, "machine": a.machine,
             "pe": a.pe, "start": a.start, "finish": a.finish,
             "cost": a.cost}
            for a in plan.assignments
        ],
        "makespan": plan.makespan,
        "total_cost": plan.total_cost,
        "resource_order_used": list(plan.resource_order_used),
    }


def result_body_jsonable(result: ExperimentResult) -> dict:
    """The stable six-field result record (also the API response body)."""
    return {
        "plan": plan_to_jsonable(result.plan),
        "simulated": [
            {"task": c.task, "resource": c.resource, "machine": c.machine,
             "pe": c.pe, "start": c.start, "finish": c.finish,
             "cost": c.cost}
            for c in result.completions
        ],
        "makespan": result.makespan,
        "total_cost": result.total_cost,
        "per_resource_utilization": dict(result.utilization),
        "events_processed": result.events_processed,
    }


def result_to_jsonable(result: ExperimentResult) -> dict:
    doc: dict = {"format_version": FORMAT_VERSION, "kind": "result"}
    doc.update(result_body_jsonable(result))
    return doc


def save_result(result: ExperimentResult, path) -> None:
    save_json(result_to_jsonable(result), path)


# ------------------------------------------------------------------ plumbing

def dumps_canonical(doc) -> str:
    """Serialize with a stable layout; key order is the insertion order."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def save_json(doc, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_canonical(doc))
