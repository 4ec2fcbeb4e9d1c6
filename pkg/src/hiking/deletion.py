"""Deletion and satisfaction variants of the interval partition problem.

All variants reuse :class:`hiking.interval_dp.DPTable`.  Weights are exact
rationals; they are scaled by the least common denominator to integers before
entering the table so every comparison in the DP is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import InstanceError, IntervalInstance, Partition, require_valid
from .interval_dp import FULL_TABLE_MAX_N, DPTable, _keep_mode, _sorted_arrays


@dataclass(frozen=True)
class DeletionResult:
    removed: frozenset
    partition: Partition
    objective: int | Fraction


def _scale(weights) -> tuple[list[int], int]:
    scale = 1
    for w in weights:
        scale = math.lcm(scale, Fraction(w).denominator)
    return [int(Fraction(w) * scale) for w in weights], scale


def _translate(inst: IntervalInstance, order, groups, removed) -> tuple[Partition, frozenset]:
    ids = [inst.agents[p].id for p in order]
    gone = frozenset(ids[i - 1] for i in removed)
    return Partition.of([[ids[i - 1] for i in g] for g in groups], gone), gone


def _check_x(inst: IntervalInstance, x: int) -> None:
    if not 0 <= x <= inst.n:
        raise InstanceError(f"x={x} outside [0, {inst.n}]")


def _min_delete(inst: IntervalInstance, weights, full_table_max):
    require_valid(inst)
    if inst.n == 0:
        return DeletionResult(frozenset(), Partition.of([]), 0)
    order, lefts, rights = _sorted_arrays(inst)
    scaled, scale = _scale([weights[p] for p in order])
    table = DPTable(lefts, rights, scaled, inst.n, allow_delete=True,
                    keep=_keep_mode(inst.n, full_table_max))
    groups, removed = table.reconstruct()
    partition, gone = _translate(inst, order, groups, removed)
    return DeletionResult(gone, partition, Fraction(int(table.value()), scale))


def min_delete(inst: IntervalInstance, full_table_max: int = FULL_TABLE_MAX_N) -> DeletionResult:
    """Remove as few agents as possible so the rest admit a wonderful partition."""
    res = _min_delete(inst, [1] * inst.n, full_table_max)
    return DeletionResult(res.removed, res.partition, int(res.objective))


def min_delete_weighted(inst: IntervalInstance, full_table_max: int = FULL_TABLE_MAX_N) -> DeletionResult:
    return _min_delete(inst, inst.weights, full_table_max)


def _x_delete(inst: IntervalInstance, x: int, weights):
    require_valid(inst)
    _check_x(inst, x)
    if inst.n == 0:
        return DeletionResult(frozenset(), Partition.of([]), 0)
    order, lefts, rights = _sorted_arrays(inst)
    if weights is None:
        scaled, scale = [0] * inst.n, 1
        kw = dict(dtype=np.uint8, inf=np.uint8(1))
    else:
        scaled, scale = _scale([weights[p] for p in order])
        kw = {}
    table = DPTable(lefts, rights, scaled, inst.n, budget=x, allow_delete=True, **kw)
    if table.value(x) >= table.inf:
        return None
    groups, removed = table.reconstruct(x)
    partition, gone = _translate(inst, order, groups, removed)
    objective = x if weights is None else Fraction(int(table.value(x)), scale)
    return DeletionResult(gone, partition, objective)


def x_delete(inst: IntervalInstance, x: int) -> DeletionResult | None:
    """Remove exactly ``x`` agents so the rest admit a wonderful partition, if possible.

    Feasibility is not monotone in ``x``: three agents that all want pairs
    work with one or three removals but not with zero or two.
    """
    return _x_delete(inst, x, None)


def x_delete_min_weight(inst: IntervalInstance, x: int) -> DeletionResult | None:
    return _x_delete(inst, x, inst.weights)


def _augmented_table(inst: IntervalInstance, order, lefts, rights, k, weights=None):
    # k dummies accepting any size; their right endpoint n + k puts them last in EDD order
    n = inst.n
    size_cap = n + k
    L = lefts + [1] * k
    R = rights + [size_cap] * k
    if weights is None:
        return DPTable(L, R, [0] * (n + k), size_cap, budget=k, allow_delete=True,
                       dtype=np.uint8, inf=np.uint8(1))
    return DPTable(L, R, list(weights) + [0] * k, size_cap, budget=k, allow_delete=True)


def augmented_feasible(inst: IntervalInstance, k: int) -> bool:
    """Can all but ``k`` agents be satisfied (dummy-agent formulation)?"""
    require_valid(inst)
    order, lefts, rights = _sorted_arrays(inst)
    table = _augmented_table(inst, order, lefts, rights, k)
    return table.value(k) < table.inf


def _fill_dummies(inst, order, table, k) -> Partition:
    groups, removed = table.reconstruct(k)
    n = inst.n
    ids = [inst.agents[p].id for p in order]
    spare = [ids[i - 1] for i in removed if i <= n]
    out = []
    for g in groups:
        members = []
        for i in g:
            members.append(ids[i - 1] if i <= n else spare.pop())
        out.append(members)
    if spare:
        raise AssertionError("more removed agents than dummy slots")
    return Partition.of(out)


def max_satisfied(inst: IntervalInstance) -> tuple[Partition, int]:
    """Partition of all agents maximising the number of agents approving their size.

    Binary search for the least ``k`` such that ``k`` agents can be swapped for
    dummies that accept any size.  Removed agents then take the dummies' seats,
    so every group keeps its size.
    """
    require_valid(inst)
    n = inst.n
    if n == 0:
        return Partition.of([]), 0
    order, lefts, rights = _sorted_arrays(inst)
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        table = _augmented_table(inst, order, lefts, rights, mid)
        if table.value(mid) < table.inf:
            hi = mid
        else:
            lo = mid + 1
    table = _augmented_table(inst, order, lefts, rights, lo)
    return _fill_dummies(inst, order, table, lo), n - lo


def max_satisfied_weighted(inst: IntervalInstance) -> tuple[Partition, Fraction]:
    """Weighted variant: every dummy count ``k`` is tried, no binary search."""
    require_valid(inst)
    n = inst.n
    total = sum(inst.weights, Fraction(0))
    if n == 0:
        return Partition.of([]), total
    order, lefts, rights = _sorted_arrays(inst)
    scaled, scale = _scale([inst.agents[p].w for p in order])
    best = None
    for k in range(n + 1):
        table = _augmented_table(inst, order, lefts, rights, k, scaled)
        v = table.value(k)
        if v < table.inf and (best is None or v < best[0]):
            best = (v, k, table)
    v, k, table = best
    return _fill_dummies(inst, order, table, k), total - Fraction(int(v), scale)
