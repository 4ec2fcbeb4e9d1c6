"""Minimum egalitarian cost for arbitrary per-agent size costs.

Capping every agent's cost at ``c`` turns the cost matrix into an approval
instance (agent ``i`` approves size ``s`` iff ``cost_i(s) <= c``), and
feasibility only grows with ``c``.  Binary search over the distinct matrix
entries with any wonderful-partition decider therefore finds the optimum.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

from .core import ApprovalInstance, InstanceError, Partition
from .interval_dp import solve_wonderful
from .oracle import DEFAULT_CAP, oracle_wonderful

Decider = Callable[[ApprovalInstance], "Partition | None"]


@dataclass(frozen=True)
class CostMatrix:
    """``rows[i][s - 1]`` is agent ``i + 1``'s cost for a coalition of size ``s``."""

    rows: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise InstanceError(f"row {i + 1} has {len(r)} entries, expected {n}")
            for v in r:
                if v < 0 or v != v or v in (float("inf"), float("-inf")):
                    raise InstanceError(f"row {i + 1}: entry {v} is not a finite nonnegative cost")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def from_cost(cls, peaks, cost) -> "CostMatrix":
        """Matrix of a peak-based cost (anything with ``evaluate(peak, size)``)."""
        n = len(peaks)
        return cls(tuple(tuple(cost.evaluate(p, s) for s in range(1, n + 1)) for p in peaks))


def thresholds(m: CostMatrix) -> list:
    return sorted({v for row in m.rows for v in row})


def approval_instance_at(m: CostMatrix, c) -> ApprovalInstance:
    return ApprovalInstance.from_sets(
        [{s for s, v in enumerate(row, start=1) if v <= c} for row in m.rows], n=m.n)


def is_naturally_single_peaked(m: CostMatrix) -> tuple[int, ...] | None:
    """Per-agent peaks if every row strictly falls to a unique minimum and then strictly rises."""
    peaks = []
    for row in m.rows:
        p = min(range(len(row)), key=row.__getitem__)
        if any(row[k] <= row[k + 1] for k in range(p)):
            return None
        if any(row[k] >= row[k + 1] for k in range(p, len(row) - 1)):
            return None
        peaks.append(p + 1)
    return tuple(peaks)


def oracle_decider(cap: int | None = DEFAULT_CAP) -> Decider:
    def decide(inst: ApprovalInstance):
        return oracle_wonderful(inst, cap=cap)
    return decide


def interval_decider(inst: ApprovalInstance):
    """Interval DP decider; empty approval sets are simply infeasible."""
    if any(not s for s in inst.sets):
        return None
    iv = inst.interval_form()
    if iv is None:
        raise InstanceError("interval decider needs contiguous approval sets")
    return solve_wonderful(iv)


def min_eg(m: CostMatrix, decider: Decider) -> tuple[object, Partition]:
    """Smallest threshold whose approval instance is feasible, with a witness.

    The largest threshold always works (everyone approves every size), so
    the search only ever narrows a range known to contain a feasible value.
    """
    if m.n == 0:
        return 0, Partition.of([])
    values = thresholds(m)
    lo, hi = 0, len(values) - 1
    witness = decider(approval_instance_at(m, values[hi]))
    if witness is None:
        raise AssertionError("decider rejected the all-approving instance")
    while lo < hi:
        mid = (lo + hi) // 2
        p = decider(approval_instance_at(m, values[mid]))
        if p is None:
            lo = mid + 1
        else:
            hi, witness = mid, p
    return values[lo], witness


def min_eg_general(m: CostMatrix, cap: int | None = DEFAULT_CAP) -> tuple[object, Partition]:
    """Min-Eg for any matrix through the exhaustive decider (exponential time)."""
    if cap is not None and m.n > cap:
        raise InstanceError(f"general Min-Eg is capped at n={cap} agents (got {m.n})")
    warnings.warn("general Min-Eg uses exhaustive search and takes exponential time",
                  RuntimeWarning, stacklevel=2)
    return min_eg(m, oracle_decider(cap))


def min_eg_single_peaked(m: CostMatrix) -> tuple[object, Partition]:
    """Min-Eg for naturally single-peaked rows using the interval DP as decider.

    Every threshold leaves each agent a band of sizes around its peak, so the
    approval instances are interval instances.
    """
    peaks = is_naturally_single_peaked(m)
    if peaks is None:
        raise InstanceError("cost matrix is not naturally single-peaked")

    def decide(inst: ApprovalInstance):
        for s, p in zip(inst.sets, peaks):
            if s and (p not in s or max(s) - min(s) + 1 != len(s)):
                raise AssertionError("approval set of a single-peaked row is not a band around its peak")
        return interval_decider(inst)

    return min_eg(m, decide)


def max_cost(m: CostMatrix, p: Partition):
    """Largest per-agent cost of a partition of agents ``1..n``."""
    return max((m.rows[a - 1][len(g) - 1] for g in p.groups for a in g), default=0)
