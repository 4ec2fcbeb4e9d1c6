"""Minimum social cost when every agent has an ideal group size.

Agents are sorted by peak.  It suffices to search compact partitions (each
coalition a contiguous block of the sorted order), which are exactly the
source-target paths of a layered DAG over nodes ``(next agent, exclusions so
far)``.  The path cost is the sum (utilitarian) or maximum (egalitarian) of
the coalition costs ``c(i, j)`` on its edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from .core import InstanceError, Partition

OBJECTIVES = ("utilitarian", "egalitarian")
_KIND_ALIASES = {"abs": "absolute", "absolute": "absolute", "power": "power", "table": "table"}


@dataclass(frozen=True)
class CostSpec:
    """Cost of an agent with peak ``p`` in a coalition of size ``s``.

    ``absolute`` is ``|s - p|``, ``power`` is ``|s - p| ** gamma`` and
    ``table`` reads ``table[p - 1][s - 1]``.
    """

    kind: str = "absolute"
    gamma: float = 1
    table: tuple | None = None

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind)
        if kind is None:
            raise InstanceError(f"unknown cost kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == "power" and self.gamma < 1:
            raise InstanceError("power cost needs gamma >= 1")
        if kind == "table":
            if self.table is None:
                raise InstanceError("table cost needs a table")
            object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))

    @classmethod
    def absolute(cls) -> "CostSpec":
        return cls("absolute")

    @classmethod
    def power(cls, gamma) -> "CostSpec":
        return cls("power", gamma)

    @classmethod
    def from_table(cls, table) -> "CostSpec":
        return cls("table", table=table)

    def _integral_gamma(self) -> bool:
        return float(self.gamma).is_integer()

    def evaluate(self, peak: int, size: int):
        if self.kind == "table":
            return self.table[peak - 1][size - 1]
        d = abs(size - peak)
        if self.kind == "absolute":
            return d
        if self._integral_gamma():
            return d ** int(self.gamma)
        return float(d) ** float(self.gamma)

    def grid(self, n: int) -> np.ndarray:
        """``grid[p - 1, s - 1] = cost(p, s)`` for all peaks and sizes in ``[n]``.

        Integer-valued costs yield an int64 grid; anything else is float64.
        """
        if self.kind == "table":
            rows = [row[:n] for row in self.table[:n]]
            if len(rows) < n or any(len(row) < n for row in rows):
                raise InstanceError(f"cost table smaller than {n}x{n}")
            if all(Fraction(v).denominator == 1 for row in rows for v in row):
                g = np.array([[int(v) for v in row] for row in rows], dtype=np.int64)
            else:
                g = np.array([[float(v) for v in row] for row in rows], dtype=np.float64)
        else:
            idx = np.arange(1, n + 1)
            d = np.abs(idx[None, :] - idx[:, None])
            if self.kind == "absolute":
                g = d.astype(np.int64)
            elif self._integral_gamma():
                g = d.astype(np.int64) ** int(self.gamma)
            else:
                g = d.astype(np.float64) ** float(self.gamma)
        if n and (g < 0).any():
            raise InstanceError("costs must be nonnegative")
        if g.dtype == np.float64 and not np.isfinite(g).all():
            raise InstanceError("costs must be finite")
        return g


@dataclass(frozen=True)
class SinglePeakedInstance:
    peaks: tuple[int, ...]
    cost: CostSpec = field(default_factory=CostSpec)
    alpha: int = 0
    objective: str = "utilitarian"
    ids: tuple[Hashable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "peaks", tuple(int(p) for p in self.peaks))
        n = len(self.peaks)
        if not self.ids:
            object.__setattr__(self, "ids", tuple(range(1, n + 1)))
        if len(self.ids) != n or len(set(self.ids)) != n:
            raise InstanceError("ids must be unique, one per agent")
        if any(not 1 <= p <= n for p in self.peaks):
            raise InstanceError(f"peaks must lie in [1, {n}]")
        if not 0 <= self.alpha <= n:
            raise InstanceError(f"alpha={self.alpha} outside [0, {n}]")
        if self.objective not in OBJECTIVES:
            raise InstanceError(f"objective must be one of {OBJECTIVES}")

    @property
    def n(self) -> int:
        return len(self.peaks)

    @property
    def agent_ids(self) -> tuple:
        return self.ids

    def order(self) -> list[int]:
        """Agent positions sorted by peak, ties by input position."""
        return sorted(range(self.n), key=lambda i: (self.peaks[i], i))


def monotone_violation(cost: CostSpec, n: int):
    """A triple ``(p, s, s2)`` breaking monotonicity, or None.

    Checking adjacent sizes is enough: cost must not increase stepping towards
    the peak from either side.
    """
    g = cost.grid(n)
    for p in range(1, n + 1):
        row = g[p - 1]
        for s in range(1, p):
            if row[s] > row[s - 1]:
                return (p, s + 1, s)
        for s in range(p, n):
            if row[s - 1] > row[s]:
                return (p, s, s + 1)
    return None


def check_monotone(cost: CostSpec, n: int) -> bool:
    return monotone_violation(cost, n) is None


def quadrangle_violation(cost: CostSpec, n: int, reverse: bool = False, tol: float = 1e-9):
    """Exhaustive scan for ``cost(a,c) + cost(b,d) > cost(a,d) + cost(b,c)``.

    Forward quadruples satisfy ``a <= b <= c <= d``, reverse ones
    ``a >= b >= c >= d``.  Returns the first failing ``(a, b, c, d)`` or None.
    """
    g = cost.grid(n)
    exact = g.dtype != np.float64
    slack = 0 if exact else tol * max(1.0, float(np.abs(g).max(initial=0)))
    for a in range(1, n + 1):
        bs = range(a, n + 1) if not reverse else range(a, 0, -1)
        for b in bs:
            if not reverse:
                cs = np.arange(b, n + 1)
            else:
                cs = np.arange(1, b + 1)
            for c in cs:
                ds = np.arange(c, n + 1) if not reverse else np.arange(1, c + 1)
                lhs = g[a - 1, c - 1] + g[b - 1, ds - 1]
                rhs = g[a - 1, ds - 1] + g[b - 1, c - 1]
                bad = np.nonzero(lhs > rhs + slack)[0]
                if bad.size:
                    return (a, b, int(c), int(ds[bad[0]]))
    return None


def check_quadrangle(cost: CostSpec, n: int) -> tuple[bool, bool]:
    return (quadrangle_violation(cost, n) is None,
            quadrangle_violation(cost, n, reverse=True) is None)


def sliding_window_max(values: np.ndarray, width: int) -> np.ndarray:
    """Maximum of every window of ``width`` consecutive values in O(len) time.

    Block decomposition: with blocks of length ``width``, a window is a suffix
    of one block followed by a prefix of the next.
    """
    m = len(values)
    if width == 1:
        return values.copy()
    pad = (-m) % width
    padded = np.concatenate([values, np.full(pad, values.min(), dtype=values.dtype)])
    blocks = padded.reshape(-1, width)
    prefix = np.maximum.accumulate(blocks, axis=1).ravel()
    suffix = np.maximum.accumulate(blocks[:, ::-1], axis=1)[:, ::-1].ravel()
    return np.maximum(suffix[: m - width + 1], prefix[width - 1: m])


def precompute_coalition_costs(inst: SinglePeakedInstance, grid: np.ndarray | None = None) -> np.ndarray:
    """``c[i, j]`` (0-based, ``i <= j``) is the cost of coalition ``i..j`` of the sorted agents.

    Entries below the diagonal are unused and left at zero.
    """
    n = inst.n
    g = inst.cost.grid(n) if grid is None else grid
    peaks = np.array(sorted(inst.peaks), dtype=np.int64)
    c = np.zeros((n, n), dtype=g.dtype)
    for size in range(1, n + 1):
        v = g[peaks - 1, size - 1]
        if inst.objective == "utilitarian":
            cs = np.concatenate([np.zeros(1, dtype=v.dtype), np.cumsum(v)])
            agg = cs[size:] - cs[: n - size + 1]
        else:
            agg = sliding_window_max(v, size)
        starts = np.arange(n - size + 1)
        c[starts, starts + size - 1] = agg
    return c


def dag_size(n: int, alpha: int) -> tuple[int, int]:
    """Node and edge counts of the layered DAG, source and target included."""
    nodes = (n + 1) * (alpha + 1) + 2
    edges = 1 + (alpha + 1) + n * alpha + (alpha + 1) * n * (n + 1) // 2
    return nodes, edges


def _check_preconditions(inst: SinglePeakedInstance) -> None:
    bad = monotone_violation(inst.cost, inst.n)
    if bad is not None:
        raise InstanceError(f"cost is not monotone: (peak, s, s') = {bad}")
    if inst.objective == "utilitarian" and inst.cost.kind == "table":
        for reverse in (False, True):
            bad = quadrangle_violation(inst.cost, inst.n, reverse=reverse)
            if bad is not None:
                name = "reverse quadrangle" if reverse else "quadrangle"
                raise InstanceError(f"cost violates the {name} inequality at (a, b, c, d) = {bad}")


def _tight(a, b, exact: bool):
    if exact:
        return a == b
    return np.isclose(a, b, rtol=1e-9, atol=1e-12)


def solve_single_peaked(inst: SinglePeakedInstance) -> tuple[Partition, int | float]:
    """Optimal partition with at most ``alpha`` excluded agents, and its cost.

    Shortest (or bottleneck) path over the DAG in topological order.  Node
    ``(m, j)`` means the agents before sorted position ``m`` are settled with
    ``j`` of them excluded; an exclusion edge advances ``m`` and ``j`` at cost
    0, a coalition edge from ``(i, j)`` to ``(m, j)`` forms the block
    ``i..m-1``.

    The optimum is attained by a path whose coalition sizes never decrease,
    but an arbitrary shortest path need not have that shape.  A second sweep
    over the same edges therefore keeps only edges that can lie on an optimal
    path and records, per node, the smallest last-coalition size reachable
    without a size decrease; the partition is read back from that sweep.
    Among optimal partitions the one with the fewest exclusions is returned.
    """
    _check_preconditions(inst)
    n, alpha = inst.n, inst.alpha
    if n == 0:
        return Partition.of([]), 0
    grid = inst.cost.grid(n)
    exact = grid.dtype == np.int64
    c = precompute_coalition_costs(inst, grid).astype(np.float64)
    if exact and float(c.max()) * n >= 2 ** 53:
        raise InstanceError("integer costs too large for exact evaluation")
    egal = inst.objective == "egalitarian"
    f = np.full((n + 2, alpha + 1), np.inf)
    f[1, 0] = 0.0
    for m in range(2, n + 2):
        block = c[: m - 1, m - 2][:, None]
        cand = np.maximum(f[1:m], block) if egal else f[1:m] + block
        row = cand.min(axis=0)
        if alpha:
            row[1:] = np.minimum(row[1:], f[m - 1, :-1])
        f[m] = row
    value = f[n + 1].min()

    none = n + 1
    last = np.full((n + 2, alpha + 1), none, dtype=np.int64)
    last[1, 0] = 0
    start = np.zeros((n + 2, alpha + 1), dtype=np.int64)  # 0 marks an exclusion edge
    for m in range(2, n + 2):
        sizes = np.arange(m - 1, 0, -1)[:, None]
        block = c[: m - 1, m - 2][:, None]
        if egal:
            usable = (block <= value) | _tight(block, value, exact)
        else:
            usable = _tight(f[1:m] + block, f[m][None, :], exact) & np.isfinite(f[m])[None, :]
        usable = usable & (last[1:m] <= sizes)
        cand = np.where(usable, sizes, none)
        pick = np.argmin(cand, axis=0)
        best = cand[pick, np.arange(alpha + 1)]
        src = pick + 1
        if alpha:
            prev = last[m - 1, :-1]
            ok = prev < none
            if not egal:
                ok &= _tight(f[m - 1, :-1], f[m, 1:], exact)
            take = ok & (prev < best[1:])
            best[1:] = np.where(take, prev, best[1:])
            src[1:] = np.where(take, 0, src[1:])
        last[m] = best
        start[m] = np.where(best < none, src, 0)
    ends = [j for j in range(alpha + 1) if last[n + 1, j] < none
            and (egal or _tight(f[n + 1, j], value, exact))]
    if not ends:
        raise AssertionError("no size-monotone optimal path found")
    j = ends[0]
    order = inst.order()
    groups, excluded = [], []
    m = n + 1
    while m > 1:
        i = int(start[m, j])
        if i == 0:
            excluded.append(inst.ids[order[m - 2]])
            m, j = m - 1, j - 1
        else:
            groups.append([inst.ids[order[t - 1]] for t in range(i, m)])
            m = i
    groups.reverse()
    value = int(value) if exact else float(value)
    return Partition.of(groups, excluded), value


def social_cost(inst: SinglePeakedInstance, p: Partition):
    """Utilitarian or egalitarian cost of ``p``; excluded agents cost nothing."""
    peak = dict(zip(inst.ids, inst.peaks))
    costs = [inst.cost.evaluate(peak[a], len(g)) for g in p.groups for a in g]
    if inst.objective == "utilitarian":
        return sum(costs)
    return max(costs, default=0)


def sorted_positions(inst: SinglePeakedInstance) -> dict:
    return {inst.ids[pos]: rank for rank, pos in enumerate(inst.order())}


def is_compact(inst: SinglePeakedInstance, p: Partition) -> bool:
    """Every coalition is a contiguous block of the peak-sorted order."""
    rank = sorted_positions(inst)
    for g in p.groups:
        rs = sorted(rank[a] for a in g)
        if rs[-1] - rs[0] + 1 != len(rs):
            return False
    return True


def is_size_monotone(inst: SinglePeakedInstance, p: Partition) -> bool:
    """Participants earlier in the peak-sorted order never get strictly larger coalitions."""
    rank = sorted_positions(inst)
    sizes = sorted((rank[a], len(g)) for g in p.groups for a in g)
    return all(a[1] <= b[1] for a, b in zip(sizes, sizes[1:]))


def peaks_from(values: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(v) for v in values)
