"""Exponential reference solvers used as ground truth on small instances.

All of them exploit anonymity: an agent's cost or approval depends only on the
size it is assigned, and a size assignment is realisable iff, for every size
``s``, the number of agents assigned ``s`` is divisible by ``s``.  The search
walks the agents in input order, choosing a size (or "skip") for each, and
memoises on the residues of the per-size counts.  Nothing here relies on the
structure exploited by the polynomial algorithms.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from itertools import combinations
from typing import Sequence

from .core import ApprovalInstance, InstanceError, IntervalInstance, Partition, chunk_by_size

DEFAULT_CAP = 12


class OracleCapExceeded(InstanceError):
    pass


def _check_cap(n: int, cap: int | None) -> None:
    if cap is not None and n > cap:
        raise OracleCapExceeded(f"instance has {n} agents, oracle cap is {cap}")


def _as_approval(inst) -> ApprovalInstance:
    return inst.to_approval() if isinstance(inst, IntervalInstance) else inst


def exhaustive_search(options: Sequence[Sequence[tuple]], aggregate: str = "sum", *,
                      exact_skips: int | None = None, max_skips: int | None = None,
                      filler: bool = False):
    """Optimise over all per-agent choices.

    ``options[i]`` lists ``(size, cost)`` pairs; ``size=None`` marks a skip.
    With ``filler`` set, skipped agents still join the partition and may top
    up any group, so the requirement becomes "total shortfall <= skips";
    otherwise every per-size count must be divisible by its size.

    Returns ``(best, choices)`` with ``best=None`` if nothing is feasible.
    """
    N = len(options)
    sizes = sorted({s for opts in options for s, _ in opts if s is not None})
    pos = {s: j for j, s in enumerate(sizes)}
    rem = [[0] * len(sizes) for _ in range(N + 1)]
    for idx in range(N - 1, -1, -1):
        rem[idx] = rem[idx + 1][:]
        for s in {s for s, _ in options[idx] if s is not None}:
            rem[idx][pos[s]] += 1
    limit = exact_skips if exact_skips is not None else max_skips
    track = filler or limit is not None
    combine = (lambda c, f: c + f) if aggregate == "sum" else max
    memo: dict = {}

    def alive(idx, res, skips):
        # a branch dies when the remaining agents cannot close every open size
        shortfall = 0
        rest = rem[idx]
        for j, s in enumerate(sizes):
            d = (-res[j]) % s
            if d and not filler and d > rest[j]:
                return False
            shortfall += d
        if filler:
            return shortfall <= skips + (N - idx)
        if exact_skips is not None and skips + (N - idx) < exact_skips:
            return False
        return shortfall <= N - idx

    def finished(res, skips):
        if filler:
            return sum((-r) % s for r, s in zip(res, sizes)) <= skips
        return not any(res) and (exact_skips is None or skips == exact_skips)

    def moves(idx, res, skips):
        for s, c in options[idx]:
            if s is None:
                if limit is not None and skips >= limit:
                    continue
                nres, nsk = res, skips + 1 if track else 0
            else:
                j = pos[s]
                nres = res[:j] + ((res[j] + 1) % s,) + res[j + 1:]
                nsk = skips
            if alive(idx + 1, nres, nsk):
                yield s, c, nres, nsk

    def go(idx, res, skips):
        key = (idx, res, skips)
        if key in memo:
            return memo[key]
        if idx == N:
            val = 0 if finished(res, skips) else None
        else:
            val = None
            for _, c, nres, nsk in moves(idx, res, skips):
                fut = go(idx + 1, nres, nsk)
                if fut is not None:
                    tot = combine(c, fut)
                    if val is None or tot < val:
                        val = tot
        memo[key] = val
        return val

    start = (0,) * len(sizes)
    if not alive(0, start, 0):
        return None, None
    best = go(0, start, 0)
    if best is None:
        return None, None
    choices = []
    res, skips = start, 0
    for idx in range(N):
        for s, c, nres, nsk in moves(idx, res, skips):
            fut = go(idx + 1, nres, nsk)
            if fut is not None and combine(c, fut) == go(idx, res, skips):
                choices.append(s)
                res, skips = nres, nsk
                break
    return best, choices


def _partition(ids, choices, filler=False) -> Partition:
    chosen = [(a, s) for a, s in zip(ids, choices) if s is not None]
    skipped = [a for a, s in zip(ids, choices) if s is None]
    if not filler:
        return Partition.of(chunk_by_size(chosen), skipped)
    by_size = defaultdict(list)
    for a, s in chosen:
        by_size[s].append(a)
    spare = list(skipped)
    groups = []
    for s in sorted(by_size):
        members = by_size[s]
        while len(members) % s:
            members.append(spare.pop())
        groups.extend(tuple(members[k:k + s]) for k in range(0, len(members), s))
    if spare:
        groups.append(tuple(spare))
    return Partition.of(groups)


def oracle_wonderful(inst, cap: int | None = DEFAULT_CAP) -> Partition | None:
    inst = _as_approval(inst)
    _check_cap(len(inst.ids), cap)
    best, choices = exhaustive_search([[(s, 0) for s in sorted(S)] for S in inst.sets])
    return None if best is None else _partition(inst.ids, choices)


def _skip_cost(inst: ApprovalInstance, weighted: bool):
    return list(inst.weights) if weighted else [1] * len(inst.ids)


def oracle_min_delete(inst, weighted: bool = False, cap: int | None = DEFAULT_CAP):
    """Minimum number (or weight) of removed agents; returns ``(objective, partition)``."""
    inst = _as_approval(inst)
    _check_cap(len(inst.ids), cap)
    costs = _skip_cost(inst, weighted)
    opts = [[(s, 0) for s in sorted(S)] + [(None, c)] for S, c in zip(inst.sets, costs)]
    best, choices = exhaustive_search(opts)
    return best, _partition(inst.ids, choices)


def oracle_x_delete(inst, x: int, weighted: bool = False, cap: int | None = DEFAULT_CAP):
    """Remove exactly ``x`` agents; ``(objective, partition)`` or None if impossible.

    The objective is ``x`` when unweighted and the least removed weight otherwise.
    """
    inst = _as_approval(inst)
    _check_cap(len(inst.ids), cap)
    costs = _skip_cost(inst, weighted)
    opts = [[(s, 0) for s in sorted(S)] + [(None, c)] for S, c in zip(inst.sets, costs)]
    best, choices = exhaustive_search(opts, exact_skips=x)
    if best is None:
        return None
    return best, _partition(inst.ids, choices)


def oracle_max_satisfied(inst, weighted: bool = False, cap: int | None = DEFAULT_CAP):
    """Most satisfied agents (or weight) over partitions of everyone.

    Unsatisfied agents are free fillers: they top up groups whose members
    need a particular size, and whatever is left forms one extra group.
    """
    inst = _as_approval(inst)
    _check_cap(len(inst.ids), cap)
    costs = _skip_cost(inst, weighted)
    opts = [[(s, 0) for s in sorted(S)] + [(None, c)] for S, c in zip(inst.sets, costs)]
    lost, choices = exhaustive_search(opts, filler=True)
    total = sum(costs)
    return total - lost, _partition(inst.ids, choices, filler=True)


def oracle_single_peaked(inst, cap: int | None = DEFAULT_CAP):
    """Exact optimum for a :class:`~hiking.single_peaked.SinglePeakedInstance`."""
    n = len(inst.peaks)
    _check_cap(n, cap)
    opts = []
    for p in inst.peaks:
        row = [(s, inst.cost.evaluate(p, s)) for s in range(1, n + 1)]
        if inst.alpha > 0:
            row.append((None, 0))
        opts.append(row)
    agg = "sum" if inst.objective == "utilitarian" else "max"
    best, choices = exhaustive_search(opts, agg, max_skips=inst.alpha)
    return best, _partition(inst.agent_ids, choices)


def oracle_min_eg(m, cap: int | None = DEFAULT_CAP):
    """Minimum over partitions of the largest per-agent cost; ``(value, partition)``."""
    rows = m.rows
    n = len(rows)
    _check_cap(n, cap)
    if n == 0:
        return 0, Partition.of([])
    opts = [[(s, row[s - 1]) for s in range(1, n + 1)] for row in rows]
    best, choices = exhaustive_search(opts, "max")
    return best, _partition(list(range(1, n + 1)), choices)


def oracle_orientation(g, max_edges: int | None = 24):
    """An orientation with every in-degree divisible by its label, or None.

    Parallel edges are interchangeable, so each class of ``c`` parallel edges
    contributes ``c + 1`` choices instead of ``2**c``.
    """
    edges = [tuple(e) for e in g.edges]
    if max_edges is not None and len(edges) > max_edges:
        raise OracleCapExceeded(f"{len(edges)} edges exceed the cap of {max_edges}")
    classes: dict[tuple, list[int]] = {}
    for idx, (u, v) in enumerate(edges):
        classes.setdefault((min(u, v), max(u, v)), []).append(idx)
    keys = list(classes)
    remaining = Counter()
    for u, v in edges:
        remaining[u] += 1
        remaining[v] += 1
    indeg = Counter()
    split = [0] * len(keys)

    def ok(node):
        d, rest = indeg[node], remaining[node]
        return (-d) % node <= rest

    def go(ci):
        if ci == len(keys):
            return True
        u, v = keys[ci]
        c = len(classes[keys[ci]])
        remaining[u] -= c
        remaining[v] -= c
        for t in range(c + 1):
            indeg[v] += t
            indeg[u] += c - t
            if ok(u) and ok(v) and go(ci + 1):
                split[ci] = t
                return True
            indeg[v] -= t
            indeg[u] -= c - t
        remaining[u] += c
        remaining[v] += c
        return False

    if not go(0):
        return None
    heads = [0] * len(edges)
    for (u, v), t in zip(keys, split):
        members = classes[(u, v)]
        for pos, idx in enumerate(members):
            heads[idx] = v if pos < t else u
    return tuple(heads)


def oracle_x3c(x, max_triples: int | None = 20):
    """First exact cover in lexicographic order of 1-based triple indices, or None."""
    q = len(x.triples)
    if max_triples is not None and q > max_triples:
        raise OracleCapExceeded(f"{q} triples exceed the cap of {max_triples}")
    ground = set(range(1, 3 * x.k + 1))
    for combo in combinations(range(q), x.k):
        covered = [e for j in combo for e in x.triples[j]]
        if len(covered) == len(ground) and set(covered) == ground:
            return tuple(j + 1 for j in combo)
    return None

