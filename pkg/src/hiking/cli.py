"""Command-line front end.

Exit codes: 0 when the command succeeded (a solution was found or a solution
file checked out), 2 when the instance is proven infeasible or the solution
is rejected, 1 for usage and data errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import oracle
from .core import (ApprovalInstance, InstanceError, IntervalInstance, Partition, check_coverage,
                   validate_partition)
from .deletion import (max_satisfied, max_satisfied_weighted, min_delete, min_delete_weighted,
                       x_delete, x_delete_min_weight)
from .egalitarian import (CostMatrix, is_naturally_single_peaked, max_cost, min_eg_general,
                          min_eg_single_peaked)
from .interval_dp import solve_wonderful
from .reductions import (OrientationInstance, X3CInstance, orientation_to_wp,
                         verify_orientation, wp2_to_orientation, x3c_to_orientation)
from .serialize import (cost_from_json, cost_to_json, dump, loads, number_out, partition_from_json,
                        partition_to_json)
from .single_peaked import SinglePeakedInstance, social_cost, solve_single_peaked

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


@dataclass
class RunResult:
    status: str  # feasible | infeasible | error
    objective: object = None
    partition: Partition | None = None
    diagnostics: list = field(default_factory=list)
    problem: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {"feasible": EXIT_OK, "infeasible": EXIT_INFEASIBLE}.get(self.status, EXIT_ERROR)

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.problem:
            out["problem"] = self.problem
        if self.objective is not None:
            out["objective"] = number_out(self.objective)
        if self.partition is not None:
            out.update(partition_to_json(self.partition))
        out.update(self.extra)
        if self.diagnostics:
            out["diagnostics"] = list(self.diagnostics)
        return out

    def to_text(self) -> str:
        lines = [f"status: {self.status}"]
        if self.objective is not None:
            lines.append(f"objective: {number_out(self.objective)}")
        if self.partition is not None:
            for g in self.partition.groups:
                lines.append("group: " + " ".join(map(str, g)))
            if self.partition.excluded:
                lines.append("excluded: " + " ".join(map(str, sorted(self.partition.excluded, key=repr))))
        for k, v in self.extra.items():
            lines.append(f"{k}: {json.dumps(v)}")
        lines.extend(f"note: {d}" for d in self.diagnostics)
        return "\n".join(lines)


def read_instance(path: str):
    if path == "-":
        return loads(sys.stdin.read())
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None


def _expect(inst, *types):
    if not isinstance(inst, types):
        names = " or ".join(t.__name__ for t in types)
        raise InstanceError(f"this command needs a {names}, got {type(inst).__name__}")
    return inst


def _cross_check(result: RunResult, ours, theirs, what: str) -> RunResult:
    if ours != theirs:
        result.status = "error"
        result.diagnostics.append(f"oracle mismatch on {what}: solver {ours!r}, oracle {theirs!r}")
    else:
        result.diagnostics.append(f"oracle agrees on {what}")
    return result


def _with_oracle(args, n: int, check) -> None:
    if not args.oracle:
        return None
    if n > args.oracle_cap:
        return f"oracle skipped: {n} agents exceed the cap of {args.oracle_cap}"
    return check()


def cmd_solve(args, inst) -> RunResult:
    inst = _expect(inst, IntervalInstance)
    p = solve_wonderful(inst)
    res = RunResult("feasible" if p is not None else "infeasible", partition=p, problem="wonderful")

    def check():
        _cross_check(res, p is not None, oracle.oracle_wonderful(inst, cap=None) is not None, "feasibility")
    note = _with_oracle(args, inst.n, check)
    if note:
        res.diagnostics.append(note)
    return res


def cmd_min_delete(args, inst) -> RunResult:
    inst = _expect(inst, IntervalInstance)
    out = min_delete_weighted(inst) if args.weighted else min_delete(inst)
    res = RunResult("feasible", out.objective, out.partition, problem="min-delete",
                    extra={"weighted": bool(args.weighted)})

    def check():
        _cross_check(res, out.objective, oracle.oracle_min_delete(inst, args.weighted, cap=None)[0],
                     "objective")
    note = _with_oracle(args, inst.n, check)
    if note:
        res.diagnostics.append(note)
    return res


def cmd_x_delete(args, inst) -> RunResult:
    inst = _expect(inst, IntervalInstance)
    out = x_delete_min_weight(inst, args.x) if args.weighted else x_delete(inst, args.x)
    extra = {"x": args.x, "weighted": bool(args.weighted)}
    if out is None:
        res = RunResult("infeasible", problem="x-delete", extra=extra)
    else:
        res = RunResult("feasible", out.objective, out.partition, problem="x-delete", extra=extra)

    def check():
        ref = oracle.oracle_x_delete(inst, args.x, args.weighted, cap=None)
        _cross_check(res, None if out is None else out.objective, None if ref is None else ref[0], "objective")
    note = _with_oracle(args, inst.n, check)
    if note:
        res.diagnostics.append(note)
    return res


def cmd_max_satisfied(args, inst) -> RunResult:
    inst = _expect(inst, IntervalInstance)
    p, value = max_satisfied_weighted(inst) if args.weighted else max_satisfied(inst)
    res = RunResult("feasible", value, p, problem="max-satisfied", extra={"weighted": bool(args.weighted)})

    def check():
        _cross_check(res, value, oracle.oracle_max_satisfied(inst, args.weighted, cap=None)[0], "objective")
    note = _with_oracle(args, inst.n, check)
    if note:
        res.diagnostics.append(note)
    return res


def _override_peaks(args, inst: SinglePeakedInstance) -> SinglePeakedInstance:
    cost = inst.cost
    if args.cost:
        kind, _, gamma = args.cost.partition(":")
        if kind == "table":
            if inst.cost.kind != "table":
                raise InstanceError("--cost table needs a table in the instance file")
        elif kind == "power":
            cost = cost_from_json({"kind": "power", "gamma": gamma or 1})
        else:
            cost = cost_from_json({"kind": kind})
    return SinglePeakedInstance(
        inst.peaks, cost,
        inst.alpha if args.alpha is None else args.alpha,
        inst.objective if args.objective is None else args.objective,
        inst.ids)


def cmd_single_peaked(args, inst) -> RunResult:
    inst = _override_peaks(args, _expect(inst, SinglePeakedInstance))
    p, value = solve_single_peaked(inst)
    res = RunResult("feasible", value, p, problem="single-peaked",
                    extra={"alpha": inst.alpha, "objective_kind": inst.objective,
                           "cost": cost_to_json(inst.cost)})

    def check():
        _cross_check(res, value, oracle.oracle_single_peaked(inst, cap=None)[0], "objective")
    note = _with_oracle(args, inst.n, check)
    if note:
        res.diagnostics.append(note)
    return res


def cmd_min_eg(args, inst) -> RunResult:
    m = _expect(inst, CostMatrix)
    if is_naturally_single_peaked(m) is not None:
        value, p = min_eg_single_peaked(m)
        route = "interval"
    else:
        value, p = min_eg_general(m, cap=args.oracle_cap)
        route = "exhaustive"
    res = RunResult("feasible", value, p, problem="min-eg", extra={"route": route})

    def check():
        _cross_check(res, value, oracle.oracle_min_eg(m, cap=None)[0], "objective")
    note = _with_oracle(args, m.n, check)
    if note:
        res.diagnostics.append(note)
    return res


def cmd_gen_x3c(args, inst) -> RunResult:
    x = _expect(inst, X3CInstance)
    g, gmap = x3c_to_orientation(x)
    out = orientation_to_wp(g) if args.wp else g
    return RunResult("feasible", problem="gen-x3c",
                     extra={"instance": dump(out), "delta": gmap.delta})


def cmd_to_orientation(args, inst) -> RunResult:
    if isinstance(inst, IntervalInstance):
        inst = inst.to_approval()
    inst = _expect(inst, ApprovalInstance)
    return RunResult("feasible", problem="to-orientation", extra={"instance": dump(wp2_to_orientation(inst))})


def _sets_of(inst) -> dict:
    if isinstance(inst, IntervalInstance):
        inst = inst.to_approval()
    return dict(zip(inst.ids, inst.sets))


def verify_solution(inst, sol: dict) -> RunResult:
    """Check a solution document against its instance."""
    problem = sol.get("problem", "wonderful")
    diag = []

    def verdict(ok, objective=None):
        return RunResult("feasible" if ok else "infeasible", objective, problem="verify",
                         diagnostics=diag, extra={"checked": problem})

    if isinstance(inst, OrientationInstance):
        ok = verify_orientation(inst, tuple(sol["orientation"]))
        return verdict(ok)
    if sol.get("status") == "infeasible":
        raise InstanceError("an infeasible verdict carries no solution to verify")
    p = partition_from_json(sol)
    claimed = sol.get("objective")
    claimed = None if claimed is None else Fraction(claimed) if isinstance(claimed, str) else claimed
    if isinstance(inst, (IntervalInstance, ApprovalInstance)):
        report = validate_partition(inst, p)
        weights = dict(zip(inst.ids, inst.weights))
        weighted = bool(sol.get("weighted"))

        def weight(agents):
            return sum((weights[a] for a in agents), Fraction(0)) if weighted else len(agents)

        if problem == "wonderful":
            ok = report.all_satisfied
        elif problem in ("min-delete", "x-delete"):
            ok = not report.violated
            removed = weight(report.excluded)
            if problem == "x-delete" and len(report.excluded) != sol.get("x"):
                diag.append(f"{len(report.excluded)} agents removed, expected {sol.get('x')}")
                ok = False
            if claimed is not None and removed != claimed:
                diag.append(f"removed weight {removed} differs from claimed {claimed}")
                ok = False
        elif problem == "max-satisfied":
            ok = not report.excluded
            got = weight(report.satisfied)
            if claimed is not None and got != claimed:
                diag.append(f"satisfied weight {got} differs from claimed {claimed}")
                ok = False
        else:
            raise InstanceError(f"cannot verify a {problem} solution against an interval instance")
        for a, s in report.violated.items():
            diag.append(f"agent {a} sits in a group of size {s}")
        return verdict(ok, claimed)
    if isinstance(inst, SinglePeakedInstance):
        # a solution records the settings it was solved under, which may override the file
        if any(k in sol for k in ("alpha", "objective_kind", "cost")):
            cost = cost_from_json(sol["cost"]) if "cost" in sol else inst.cost
            inst = SinglePeakedInstance(inst.peaks, cost, sol.get("alpha", inst.alpha),
                                        sol.get("objective_kind", inst.objective), inst.ids)
        check_coverage(inst.ids, p)
        value = social_cost(inst, p)
        ok = len(p.excluded) <= inst.alpha
        if not ok:
            diag.append(f"{len(p.excluded)} agents excluded, budget is {inst.alpha}")
        if claimed is not None and abs(value - claimed) > 1e-9 * max(1, abs(value)):
            diag.append(f"cost {value} differs from claimed {claimed}")
            ok = False
        return verdict(ok, value)
    if isinstance(inst, CostMatrix):
        check_coverage(list(range(1, inst.n + 1)), p)
        ok = not p.excluded
        value = max_cost(inst, p)
        if claimed is not None and value != claimed:
            diag.append(f"largest cost {value} differs from claimed {claimed}")
            ok = False
        return verdict(ok, value)
    raise InstanceError(f"cannot verify solutions for {type(inst).__name__}")


def cmd_verify(args, inst) -> RunResult:
    if args.solution == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.solution) as fh:
                text = fh.read()
        except OSError as exc:
            raise InstanceError(f"cannot read {args.solution}: {exc.strerror}") from None
    try:
        sol = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid solution JSON: {exc}") from None
    return verify_solution(inst, sol)


def generate(kind: str, n: int, seed: int, weighted: bool = False):
    """Deterministic random instance of the given kind."""
    rng = random.Random(seed)
    if n < 0:
        raise InstanceError("n must be nonnegative")
    if kind == "interval":
        intervals = []
        for _ in range(n):
            l, r = sorted((rng.randint(1, n), rng.randint(1, n)))
            intervals.append((l, r))
        weights = [Fraction(rng.randint(0, 12), rng.randint(1, 6)) for _ in range(n)] if weighted else None
        return IntervalInstance.from_intervals(intervals, weights)
    if kind == "peaks":
        return SinglePeakedInstance(tuple(rng.randint(1, n) for _ in range(n)))
    if kind == "matrix":
        return CostMatrix(tuple(tuple(rng.randint(0, 2 * n) for _ in range(n)) for _ in range(n)))
    if kind == "x3c":
        k = max(n, 1)
        ground = list(range(1, 3 * k + 1))
        triples = []
        # a hidden cover keeps some instances solvable, extra triples add noise
        if rng.random() < 0.5:
            rng.shuffle(ground)
            triples += [tuple(sorted(ground[3 * t:3 * t + 3])) for t in range(k)]
        covered = {e for t in triples for e in t}
        while len(covered) < 3 * k or len(triples) < k + 1:
            t = tuple(sorted(rng.sample(range(1, 3 * k + 1), 3)))
            triples.append(t)
            covered.update(t)
        rng.shuffle(triples)
        return X3CInstance(k, tuple(triples))
    raise InstanceError(f"unknown instance kind {kind!r}")


def cmd_gen_random(args) -> RunResult:
    inst = generate(args.kind, args.n, args.seed, args.weighted)
    return RunResult("feasible", problem="gen-random", extra={"instance": dump(inst)})


COMMANDS = {
    "solve": cmd_solve,
    "min-delete": cmd_min_delete,
    "x-delete": cmd_x_delete,
    "max-satisfied": cmd_max_satisfied,
    "single-peaked": cmd_single_peaked,
    "min-eg": cmd_min_eg,
    "gen-x3c": cmd_gen_x3c,
    "to-orientation": cmd_to_orientation,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--weighted", action="store_true", help="honour agent weights")
    common.add_argument("--oracle", action="store_true",
                        help="cross-check against the exhaustive solver; a mismatch is an error")
    common.add_argument("--oracle-cap", type=int, default=oracle.DEFAULT_CAP,
                        help="largest instance the exhaustive solver is run on (default %(default)s)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="hiking", description="Coalition formation with size preferences.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_instances(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("instances", nargs="+", metavar="INSTANCE", help="JSON file, or - for stdin")
        p.add_argument("--jobs", type=int, default=1, help="worker threads for several instances")
        return p

    with_instances("solve", "find a partition in which every agent approves its group size")
    with_instances("min-delete", "remove the fewest agents (or least weight) so the rest can be partitioned")
    with_instances("x-delete", "remove exactly X agents so the rest can be partitioned").add_argument(
        "--x", type=int, required=True)
    with_instances("max-satisfied", "partition everyone, maximising satisfied agents (or weight)")
    sp = with_instances("single-peaked", "minimum cost with ideal group sizes")
    sp.add_argument("--alpha", type=int, help="maximum number of excluded agents")
    sp.add_argument("--objective", choices=("utilitarian", "egalitarian"))
    sp.add_argument("--cost", help="abs, power:GAMMA or table (the table must be in the file)")
    with_instances("min-eg", "minimise the largest agent cost for a cost matrix")
    with_instances("gen-x3c", "build the orientation gadget graph of an X3C instance").add_argument(
        "--wp", action="store_true", help="emit the equivalent approval instance instead")
    with_instances("to-orientation", "turn a two-sizes-per-agent instance into a labelled multigraph")
    v = sub.add_parser("verify", parents=[common], help="check a solution file against its instance")
    v.add_argument("instance", metavar="INSTANCE")
    v.add_argument("solution", metavar="SOLUTION")

    g = sub.add_parser("gen-random", parents=[common], help="print a seeded random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kind", choices=("interval", "peaks", "matrix", "x3c"), default="interval")
    return parser


def _run_one(args, path: str) -> RunResult:
    try:
        inst = read_instance(path)
        return COMMANDS[args.command](args, inst)
    except (InstanceError, oracle.OracleCapExceeded) as exc:
        return RunResult("error", diagnostics=[str(exc)])


def _emit(args, result: RunResult, label: str | None = None) -> None:
    if args.format == "json":
        data = result.to_json()
        if label is not None:
            data = {"input": label, **data}
        print(json.dumps(data))
    else:
        if label is not None:
            print(f"== {label}")
        print(result.to_text())


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if args.command == "gen-random":
        try:
            result = cmd_gen_random(args)
        except InstanceError as exc:
            result = RunResult("error", diagnostics=[str(exc)])
        if result.status == "feasible":
            print(json.dumps(result.extra["instance"]))
        else:
            _emit(args, result)
        return result.exit_code
    if args.command == "verify":
        result = _run_one(args, args.instance)
        _emit(args, result)
        return result.exit_code
    paths = args.instances
    if len(paths) == 1:
        results = [_run_one(args, paths[0])]
    else:
        with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
            results = list(pool.map(lambda path: _run_one(args, path), paths))
    for path, result in zip(paths, results):
        if result.status == "feasible" and "instance" in result.extra:
            # generator-style commands print the bare instance so it can be piped on
            print(json.dumps(result.extra["instance"]))
        else:
            _emit(args, result, path if len(paths) > 1 else None)
    codes = {r.exit_code for r in results}
    return EXIT_ERROR if EXIT_ERROR in codes else EXIT_INFEASIBLE if EXIT_INFEASIBLE in codes else EXIT_OK


def main() -> None:
    sys.exit(run())
