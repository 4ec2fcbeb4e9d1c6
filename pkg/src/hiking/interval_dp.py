"""Dynamic program for wonderful partitions of interval instances.

Agents are processed in earliest-due-date order (by right endpoint).  A state
``(x1, x2, i, k)`` covers the agents among the first ``i`` whose left endpoint
lies in ``[x1, x2]``; they must be split into groups with sizes in
``[x1, x2]`` while an already opened group of final size ``x2`` holds ``k``
members.  The last agent ``i`` of a state either joins that open group
(``x == x2``) or opens a group of size ``x < x2``; in the latter case the
agents with ``l <= x`` go to the left subproblem ``[x1, x]`` and the rest to
``[x + 1, x2]``.

The same table engine serves the optimisation variants in
:mod:`hiking.deletion`: values are min-plus costs (removal weights) and an
optional last axis counts removed agents.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .core import IntervalInstance, Partition, edd_order, require_valid

FULL_TABLE_MAX_N = 128


@njit(cache=True)
def _step(P, out, l, r, w, inf, allow_delete, shift_budget):
    """Fill layer ``i`` (``out``) from layer ``i - 1`` (``P``) for an agent ``[l, r]``.

    Layers are indexed ``[x1, x2, k, b]`` where ``b`` is the removal budget
    spent (always 0 when the table has a single budget slot).
    """
    S = P.shape[0] - 1
    B = P.shape[3]
    out[:] = P
    for x1 in range(1, l + 1):
        for x2 in range(l, S + 1):
            top = min(x2, r)
            for k in range(x2):
                for b in range(B):
                    best = inf
                    for x in range(l, top + 1):
                        if x == x2:
                            v = P[x1, x2, (k + 1) % x2, b]
                            if v < best:
                                best = v
                        else:
                            kk = 1 % x
                            for bp in range(b + 1):
                                v = P[x1, x, kk, bp] + P[x + 1, x2, k, b - bp]
                                if v < best:
                                    best = v
                        if best == 0:
                            break
                    if allow_delete and best > 0:
                        if shift_budget:
                            if b >= 1:
                                v = P[x1, x2, k, b - 1] + w
                                if v < best:
                                    best = v
                        else:
                            v = P[x1, x2, k, b] + w
                            if v < best:
                                best = v
                    if best > inf:
                        best = inf
                    out[x1, x2, k, b] = best


class DPTable:
    """Forward layers of the interval DP plus top-down reconstruction.

    ``lefts``/``rights``/``weights`` describe agents already sorted in EDD
    order.  ``budget`` is None for plain minimisation (a removed agent costs its
    weight) or the exact number of agents to remove.  With ``allow_delete``
    false the table answers the pure decision problem.
    """

    def __init__(self, lefts, rights, weights, size_cap, *, budget=None,
                 allow_delete=False, keep="all", dtype=None, inf=None):
        self.lefts = list(lefts)
        self.rights = list(rights)
        self.weights = list(weights)
        self.N = len(self.lefts)
        self.S = size_cap
        self.budget = budget
        self.allow_delete = allow_delete
        self.shift = budget is not None
        nb = 1 if budget is None else budget + 1
        if dtype is None:
            dtype, inf = _pick_dtype(self.weights, allow_delete)
        self.dtype, self.inf = dtype, inf
        self._kernel = _step if dtype is not object else _step.py_func
        S = max(size_cap, 1)
        base = np.full((S + 1, S + 1, S, nb), inf, dtype=dtype)
        for x1 in range(1, S + 1):
            base[x1, x1:, 0, 0] = 0
        self._base = base
        self._keep = keep
        self._cache: dict[int, np.ndarray] = {0: base}
        self._every = max(1, math.isqrt(self.N)) if keep == "checkpoint" else 0
        self._checkpoints: dict[int, np.ndarray] = {0: base}
        last = base
        for i in range(1, self.N + 1):
            last = self._advance(last, i)
            if keep == "all":
                self._cache[i] = last
            elif keep == "checkpoint" and i % self._every == 0:
                self._checkpoints[i] = last
        self.final = last

    def _advance(self, prev, i):
        out = np.empty_like(prev)
        w = self.weights[i - 1]
        if self.dtype is not object:
            w = self.dtype(w)
        self._kernel(prev, out, self.lefts[i - 1], self.rights[i - 1], w,
                     self.inf, self.allow_delete, self.shift)
        return out

    def layer(self, i: int) -> np.ndarray:
        if i in self._cache:
            return self._cache[i]
        if self._keep != "checkpoint":
            raise KeyError(f"layer {i} was not retained")
        start = (i // self._every) * self._every
        block = {start: self._checkpoints[start]}
        cur = block[start]
        for j in range(start + 1, i + 1):
            cur = self._advance(cur, j)
            block[j] = cur
        self._cache = block
        return cur

    def value(self, b: int = 0):
        if self.S == 0 or self.N == 0:
            return 0 if b == 0 else self.inf
        return self.final[1, self.S, 0, b]

    def reconstruct(self, b: int = 0):
        """Return ``(groups, removed)`` as lists of 1-based sorted positions."""
        groups: list[list[int]] = []
        removed: list[int] = []
        if self.N == 0:
            return groups, removed
        inf = self.inf

        def clip(v):
            return inf if v > inf else v

        pending = [(1, self.S, 0, b, None)]
        for i in range(self.N, 0, -1):
            cur, P = self.layer(i), self.layer(i - 1)
            l, r, w = self.lefts[i - 1], self.rights[i - 1], self.weights[i - 1]
            nxt = []
            for x1, x2, k, bb, handle in pending:
                if not x1 <= l <= x2:
                    nxt.append((x1, x2, k, bb, handle))
                    continue
                v = cur[x1, x2, k, bb]
                if v >= inf:
                    raise AssertionError("reconstruction reached an infeasible state")
                found = False
                for x in range(l, min(x2, r) + 1):
                    if x == x2:
                        k2 = (k + 1) % x2
                        if P[x1, x2, k2, bb] == v:
                            members = (handle or []) + [i]
                            if k2 == 0:
                                groups.append(members)
                                members = None
                            nxt.append((x1, x2, k2, bb, members))
                            found = True
                    else:
                        kk = 1 % x
                        for bp in range(bb + 1):
                            if clip(P[x1, x, kk, bp] + P[x + 1, x2, k, bb - bp]) == v:
                                fresh = [i]
                                if kk == 0:
                                    groups.append(fresh)
                                    fresh = None
                                nxt.append((x1, x, kk, bp, fresh))
                                nxt.append((x + 1, x2, k, bb - bp, handle))
                                found = True
                                break
                    if found:
                        break
                if not found and self.allow_delete:
                    b2 = bb - 1 if self.shift else bb
                    if b2 >= 0 and clip(P[x1, x2, k, b2] + w) == v:
                        removed.append(i)
                        nxt.append((x1, x2, k, b2, handle))
                        found = True
                if not found:
                    raise AssertionError("no transition reproduces the table value")
            pending = nxt
        for x1, x2, k, bb, handle in pending:
            if k != 0 or bb != 0 or handle is not None:
                raise AssertionError("unfinished group after reconstruction")
        return groups, removed


def _pick_dtype(weights, allow_delete):
    if not allow_delete:
        return np.uint8, np.uint8(1)
    total = sum(int(w) for w in weights)
    if total < 2 ** 60:
        return np.int64, np.int64(2 ** 61)
    return object, total + 1


def _sorted_arrays(inst: IntervalInstance):
    order = edd_order(inst)
    agents = [inst.agents[p] for p in order]
    return order, [a.l for a in agents], [a.r for a in agents]


def _keep_mode(n: int, full_table_max: int) -> str:
    return "all" if n <= full_table_max else "checkpoint"


def decide_wonderful(inst: IntervalInstance) -> bool:
    require_valid(inst)
    if inst.n == 0:
        return True
    _, lefts, rights = _sorted_arrays(inst)
    table = DPTable(lefts, rights, [0] * inst.n, inst.n, keep="last")
    return bool(table.value() == 0)


def solve_wonderful(inst: IntervalInstance, full_table_max: int = FULL_TABLE_MAX_N) -> Partition | None:
    """A wonderful partition of all agents, or None if none exists."""
    require_valid(inst)
    if inst.n == 0:
        return Partition.of([])
    order, lefts, rights = _sorted_arrays(inst)
    table = DPTable(lefts, rights, [0] * inst.n, inst.n,
                    keep=_keep_mode(inst.n, full_table_max))
    if table.value() != 0:
        return None
    groups, _ = table.reconstruct()
    ids = [inst.agents[p].id for p in order]
    return Partition.of([[ids[i - 1] for i in g] for g in groups])
