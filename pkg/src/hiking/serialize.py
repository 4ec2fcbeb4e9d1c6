"""JSON encoding of instances and solutions.

Weights and costs are exact: integers stay integers and other rationals are
written as ``"p/q"`` strings, so reading back what was written gives the same
instance.  Plain JSON floats are also accepted on input.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .core import ApprovalInstance, InstanceError, IntervalInstance, Partition, as_weight
from .egalitarian import CostMatrix
from .reductions import OrientationInstance, X3CInstance
from .single_peaked import CostSpec, SinglePeakedInstance


def number_out(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


def number_in(v):
    if isinstance(v, bool):
        raise InstanceError(f"expected a number, got {v!r}")
    if isinstance(v, str):
        try:
            return as_weight(Fraction(v))
        except ValueError:
            raise InstanceError(f"cannot read {v!r} as a number") from None
    if isinstance(v, (int, float)):
        return v
    raise InstanceError(f"expected a number, got {v!r}")


def _cost_number(v):
    # costs keep ints as ints so the solvers can stay on the exact integer path
    v = number_in(v)
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def kind_of(data: dict) -> str:
    if "agents" in data:
        if any("sizes" in a for a in data["agents"]):
            return "approval"
        return "interval"
    for key, kind in (("peaks", "peaks"), ("costs", "matrix"), ("edges", "orientation"),
                      ("triples", "x3c")):
        if key in data:
            return kind
    raise InstanceError("unrecognised instance: expected one of agents, peaks, costs, edges, triples")


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceError(f"{what} must be an integer, got {v!r}")
    return v


def parse(data: dict):
    """Build the instance object described by a decoded JSON document."""
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    kind = kind_of(data)
    try:
        if kind == "interval":
            agents = data["agents"]
            n = _int(data.get("n", len(agents)), "n")
            inst = IntervalInstance.from_intervals(
                [(_int(a["l"], "l"), _int(a["r"], "r")) for a in agents],
                [as_weight(number_in(a.get("w", 1))) for a in agents],
                [a.get("id", k + 1) for k, a in enumerate(agents)])
            return IntervalInstance(n, inst.agents)
        if kind == "approval":
            agents = data["agents"]
            n = _int(data.get("n", len(agents)), "n")
            return ApprovalInstance(
                n, tuple(a.get("id", k + 1) for k, a in enumerate(agents)),
                tuple(frozenset(_int(s, "size") for s in a["sizes"]) for a in agents),
                tuple(as_weight(number_in(a.get("w", 1))) for a in agents))
        if kind == "peaks":
            return SinglePeakedInstance(
                tuple(_int(p, "peak") for p in data["peaks"]),
                cost_from_json(data.get("cost", {"kind": "abs"})),
                _int(data.get("alpha", 0), "alpha"),
                data.get("objective", "utilitarian"),
                tuple(data.get("ids", ())))
        if kind == "matrix":
            return CostMatrix(tuple(tuple(_cost_number(v) for v in row) for row in data["costs"]))
        if kind == "orientation":
            return OrientationInstance(_int(data["max_label"], "max_label"),
                                       tuple((_int(u, "label"), _int(v, "label")) for u, v in data["edges"]))
        return X3CInstance(_int(data["k"], "k"), tuple(tuple(t) for t in data["triples"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(f"malformed {kind} instance: {exc!r}") from None


def cost_from_json(spec) -> CostSpec:
    kind = spec.get("kind", "abs")
    if kind == "power":
        return CostSpec.power(number_in(spec.get("gamma", 1)))
    if kind == "table":
        return CostSpec.from_table([[_cost_number(v) for v in row] for row in spec["table"]])
    return CostSpec(kind)


def cost_to_json(cost: CostSpec) -> dict:
    if cost.kind == "absolute":
        return {"kind": "abs"}
    if cost.kind == "power":
        return {"kind": "power", "gamma": number_out(cost.gamma)}
    return {"kind": "table", "table": [[number_out(v) for v in row] for row in cost.table]}


def dump(inst) -> dict:
    """Inverse of :func:`parse`."""
    if isinstance(inst, IntervalInstance):
        agents = []
        for a in inst.agents:
            d = {"id": a.id, "l": a.l, "r": a.r}
            if a.w != 1:
                d["w"] = number_out(a.w)
            agents.append(d)
        return {"n": inst.n, "agents": agents}
    if isinstance(inst, ApprovalInstance):
        agents = []
        for i, s, w in zip(inst.ids, inst.sets, inst.weights):
            d = {"id": i, "sizes": sorted(s)}
            if w != 1:
                d["w"] = number_out(w)
            agents.append(d)
        return {"n": inst.n, "agents": agents}
    if isinstance(inst, SinglePeakedInstance):
        out = {"peaks": list(inst.peaks), "cost": cost_to_json(inst.cost),
               "alpha": inst.alpha, "objective": inst.objective}
        if inst.ids != tuple(range(1, inst.n + 1)):
            out["ids"] = list(inst.ids)
        return out
    if isinstance(inst, CostMatrix):
        return {"costs": [[number_out(v) for v in row] for row in inst.rows]}
    if isinstance(inst, OrientationInstance):
        return {"max_label": inst.max_label, "edges": [list(e) for e in inst.edges]}
    if isinstance(inst, X3CInstance):
        return {"k": inst.k, "triples": [list(t) for t in inst.triples]}
    raise TypeError(f"cannot serialise {type(inst).__name__}")


def partition_to_json(p: Partition) -> dict:
    return {"groups": [list(g) for g in p.groups],
            "excluded": sorted(p.excluded, key=repr)}


def partition_from_json(data: dict) -> Partition:
    return Partition.of(data.get("groups", []), data.get("excluded", []))


def loads(text: str):
    try:
        return parse(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None


def dumps(inst) -> str:
    return json.dumps(dump(inst))
