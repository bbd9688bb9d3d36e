"""Canonical JSON for instances and reports.

Keys are sorted, separators compact, and floats written with 17
significant digits so that write -> read -> write is byte-identical.
Forbidden (infinite) distances are written as ``null``.

Instance layout::

    {"d": n_d, "dist": [...], "r1": n_r1, "r2": [labels],
     "scenarios": {"explicit": [[...], ...]} | {"implicit_k": k}, "version": 1}

``dist`` is the strict lower triangle of the distance matrix in row-major
order: (1,0), (2,0), (2,1), (3,0), ... over vertices ordered R1, R2, D.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import InstanceFormatError
from .model import FirstStageDecision, MetricInstance, ScenarioSet, SolveReport

SCHEMA_VERSION = 1


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        raise ValueError("NaN is not serializable")
    if math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps_canonical(obj) -> str:
    """Deterministic JSON text (no trailing newline)."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{dumps_canonical(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps_canonical(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def instance_to_obj(inst: MetricInstance) -> dict:
    n = inst.n_vertices
    rows, cols = np.tril_indices(n, -1)
    sc = inst.scenario_set
    scen = {"explicit": [list(s) for s in sc.explicit]} if sc.is_explicit else {"implicit_k": sc.k}
    return {
        "version": SCHEMA_VERSION,
        "r1": inst.n_r1,
        "r2": list(inst.r2_labels),
        "d": inst.n_d,
        "dist": [float(x) for x in inst.dist[rows, cols]],
        "scenarios": scen,
    }


def dumps_instance(inst: MetricInstance) -> str:
    return dumps_canonical(instance_to_obj(inst)) + "\n"


def _need(obj, key, kind):
    if key not in obj:
        raise InstanceFormatError(f"missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise InstanceFormatError(f"key {key!r} has the wrong type")
    return val


def instance_from_obj(obj) -> MetricInstance:
    if not isinstance(obj, dict):
        raise InstanceFormatError("instance must be a JSON object")
    version = _need(obj, "version", int)
    if version != SCHEMA_VERSION:
        raise InstanceFormatError(f"unsupported schema version {version}")
    n_r1 = _need(obj, "r1", int)
    labels = _need(obj, "r2", list)
    n_d = _need(obj, "d", int)
    flat = _need(obj, "dist", list)
    scen = _need(obj, "scenarios", dict)
    n = n_r1 + len(labels) + n_d
    if len(flat) != n * (n - 1) // 2:
        raise InstanceFormatError(f"dist has {len(flat)} entries, expected {n * (n - 1) // 2}")
    try:
        vals = np.array([np.inf if x is None else float(x) for x in flat], dtype=np.float64)
    except (TypeError, ValueError):
        raise InstanceFormatError("dist entries must be numbers or null") from None
    dist = np.zeros((n, n))
    rows, cols = np.tril_indices(n, -1)
    dist[rows, cols] = vals
    dist[cols, rows] = vals
    if set(scen) == {"explicit"}:
        sets = scen["explicit"]
        if not isinstance(sets, list) or not all(
                isinstance(s, list) and all(isinstance(r, int) and not isinstance(r, bool) for r in s)
                for s in sets):
            raise InstanceFormatError("explicit scenarios must be lists of integers")
        scenario_set = ScenarioSet.of(sets)
    elif set(scen) == {"implicit_k"}:
        k = scen["implicit_k"]
        if not isinstance(k, int) or isinstance(k, bool):
            raise InstanceFormatError("implicit_k must be an integer")
        scenario_set = ScenarioSet.implicit(k)
    else:
        raise InstanceFormatError("scenarios must hold exactly one of explicit / implicit_k")
    try:
        return MetricInstance(n_r1, [str(x) for x in labels], n_d, dist, scenario_set)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def loads_instance(text: str) -> MetricInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON: {exc}") from None
    return instance_from_obj(obj)


def read_instance(path) -> MetricInstance:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def write_instance(inst: MetricInstance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_instance(inst))


def decision_to_obj(d1: FirstStageDecision) -> dict:
    return {"drivers": list(d1.drivers), "pairs": [list(p) for p in d1.matching.pairs]}


def report_to_obj(rep: SolveReport) -> dict:
    per = [{"scenario": list(s), "cost2": v} for s, v in rep.per_scenario_cost2.items()]
    return {
        "solver": rep.solver_name,
        "cost1": rep.cost1,
        "worst_cost2": rep.worst_cost2,
        "total": rep.total,
        "opt2_guess": rep.opt2_guess,
        "worst_scenario": None if rep.worst_scenario is None else list(rep.worst_scenario),
        "per_scenario": per,
        "decision": None if rep.decision is None else decision_to_obj(rep.decision),
    }
