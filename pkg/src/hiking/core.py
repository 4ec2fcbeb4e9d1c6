"""Instances, partitions, validation and the earliest-due-date machinery.

Agents are anonymous: only the size of the coalition an agent ends up in
matters.  An :class:`IntervalInstance` gives every agent a contiguous range
``[l, r]`` of acceptable sizes; :class:`ApprovalInstance` allows arbitrary
size sets and is what the brute-force oracles and the reductions work on.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

AgentId = Hashable


class InstanceError(ValueError):
    """Raised when an instance or a partition violates its invariants."""


def as_weight(value) -> Fraction:
    """Convert a user supplied weight to an exact rational.

    Floats are read through their decimal representation, so ``0.1`` becomes
    ``1/10`` rather than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class Agent:
    id: AgentId
    l: int
    r: int
    w: Fraction = Fraction(1)

    def approves(self, size: int) -> bool:
        return self.l <= size <= self.r


@dataclass(frozen=True)
class IntervalInstance:
    n: int
    agents: tuple[Agent, ...]

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[int, int]],
                       weights: Iterable | None = None,
                       ids: Iterable[AgentId] | None = None) -> "IntervalInstance":
        """Build an instance with ids ``1..n`` unless ``ids`` is given."""
        intervals = [tuple(iv) for iv in intervals]
        n = len(intervals)
        ids = list(ids) if ids is not None else list(range(1, n + 1))
        ws = [as_weight(w) for w in weights] if weights is not None else [Fraction(1)] * n
        if not (len(ids) == len(ws) == n):
            raise InstanceError("intervals, weights and ids must have equal length")
        agents = tuple(Agent(i, l, r, w) for i, (l, r), w in zip(ids, intervals, ws))
        return cls(n, agents)

    @property
    def ids(self) -> list[AgentId]:
        return [a.id for a in self.agents]

    @property
    def intervals(self) -> list[tuple[int, int]]:
        return [(a.l, a.r) for a in self.agents]

    @property
    def weights(self) -> list[Fraction]:
        return [a.w for a in self.agents]

    def with_unit_weights(self) -> "IntervalInstance":
        return IntervalInstance(self.n, tuple(Agent(a.id, a.l, a.r) for a in self.agents))

    def to_approval(self) -> "ApprovalInstance":
        return ApprovalInstance(
            self.n,
            tuple(self.ids),
            tuple(frozenset(range(a.l, a.r + 1)) for a in self.agents),
            tuple(self.weights),
        )


@dataclass(frozen=True)
class ApprovalInstance:
    """Anonymous approval instance with arbitrary (possibly empty) size sets."""

    n: int
    ids: tuple[AgentId, ...]
    sets: tuple[frozenset, ...]
    weights: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if not self.weights:
            object.__setattr__(self, "weights", tuple(Fraction(1) for _ in self.ids))
        if not (len(self.ids) == len(self.sets) == len(self.weights)):
            raise InstanceError("ids, sets and weights must have equal length")

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], n: int | None = None,
                  weights: Iterable | None = None) -> "ApprovalInstance":
        sets = tuple(frozenset(s) for s in sets)
        ids = tuple(range(1, len(sets) + 1))
        ws = tuple(as_weight(w) for w in weights) if weights is not None else ()
        return cls(len(sets) if n is None else n, ids, sets, ws)

    def interval_form(self) -> IntervalInstance | None:
        """The equivalent interval instance, or None if some set is not contiguous or empty."""
        intervals = []
        for s in self.sets:
            if not s or max(s) - min(s) + 1 != len(s):
                return None
            intervals.append((min(s), max(s)))
        return IntervalInstance.from_intervals(intervals, self.weights, self.ids)


@dataclass(frozen=True)
class Partition:
    groups: tuple[tuple[AgentId, ...], ...]
    excluded: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, groups: Iterable[Iterable[AgentId]], excluded: Iterable[AgentId] = ()) -> "Partition":
        return cls(tuple(tuple(g) for g in groups), frozenset(excluded))

    def size_of(self) -> dict[AgentId, int]:
        """Map every grouped agent to the size of its coalition."""
        return {a: len(g) for g in self.groups for a in g}

    def covered(self) -> list[AgentId]:
        return [a for g in self.groups for a in g] + list(self.excluded)

    def sizes(self) -> list[int]:
        return sorted(len(g) for g in self.groups)

    def canonical(self) -> "Partition":
        """Same partition with groups and members in a sorted, comparable order."""
        groups = sorted((tuple(sorted(g, key=repr)) for g in self.groups), key=repr)
        return Partition(tuple(groups), self.excluded)


@dataclass
class PartitionReport:
    """Per-agent verdicts: satisfied agents, violated agents with their size, excluded agents."""

    satisfied: set = field(default_factory=set)
    violated: dict = field(default_factory=dict)
    excluded: set = field(default_factory=set)

    @property
    def all_satisfied(self) -> bool:
        return not self.violated and not self.excluded

    def status(self, agent: AgentId) -> str:
        if agent in self.satisfied:
            return "satisfied"
        if agent in self.violated:
            return "violated"
        return "excluded"


def validate_instance(inst: IntervalInstance) -> list[str]:
    """Return the list of invariant violations (empty means valid)."""
    problems = []
    if inst.n < 0:
        problems.append(f"n={inst.n} is negative")
    if len(inst.agents) != inst.n:
        problems.append(f"n={inst.n} but {len(inst.agents)} agents given")
    seen = set()
    for a in inst.agents:
        if a.id in seen:
            problems.append(f"agent {a.id!r}: duplicate id")
        seen.add(a.id)
        if a.l < 1:
            problems.append(f"agent {a.id!r}: l={a.l}<1")
        if a.l > a.r:
            problems.append(f"agent {a.id!r}: l>r ({a.l}>{a.r})")
        if a.r > inst.n:
            problems.append(f"agent {a.id!r}: r>n ({a.r}>{inst.n})")
        if a.w < 0:
            problems.append(f"agent {a.id!r}: negative weight {a.w}")
    return problems


def require_valid(inst: IntervalInstance) -> None:
    problems = validate_instance(inst)
    if problems:
        raise InstanceError("; ".join(problems))


def edd_order(inst: IntervalInstance) -> tuple[int, ...]:
    """Positions of the agents sorted by right endpoint, ties by input index."""
    return tuple(sorted(range(len(inst.agents)), key=lambda i: (inst.agents[i].r, i)))


def check_coverage(ids: Sequence[AgentId], p: Partition) -> None:
    covered = p.covered()
    counts = Counter(covered)
    dup = [a for a, c in counts.items() if c > 1]
    if dup:
        raise InstanceError(f"agents appear more than once: {dup}")
    if any(len(g) == 0 for g in p.groups):
        raise InstanceError("partition contains an empty group")
    missing = set(ids) - set(counts)
    extra = set(counts) - set(ids)
    if missing or extra:
        raise InstanceError(f"coverage mismatch: missing={sorted(missing, key=repr)} "
                            f"unknown={sorted(extra, key=repr)}")


def validate_partition(inst: IntervalInstance | ApprovalInstance, p: Partition) -> PartitionReport:
    ids = inst.ids if isinstance(inst, IntervalInstance) else list(inst.ids)
    check_coverage(ids, p)
    if isinstance(inst, IntervalInstance):
        accepts = {a.id: a.approves for a in inst.agents}
    else:
        accepts = {i: s.__contains__ for i, s in zip(inst.ids, inst.sets)}
    report = PartitionReport(excluded=set(p.excluded))
    for agent, size in p.size_of().items():
        if accepts[agent](size):
            report.satisfied.add(agent)
        else:
            report.violated[agent] = size
    return report


def is_wonderful(inst, p: Partition) -> bool:
    return validate_partition(inst, p).all_satisfied


def _require_wonderful(inst: IntervalInstance, p: Partition) -> None:
    report = validate_partition(inst, p)
    if not report.all_satisfied:
        raise InstanceError(f"partition is not wonderful: violated={report.violated} "
                            f"excluded={sorted(report.excluded, key=repr)}")


def is_edd(inst: IntervalInstance, p: Partition) -> bool:
    """True iff no pair ``i`` before ``j`` in EDD order has ``l_i <= |pi(j)| < |pi(i)|``."""
    _require_wonderful(inst, p)
    return _first_edd_violation(inst, p.size_of()) is None


def _first_edd_violation(inst: IntervalInstance, size: dict) -> tuple[int, int] | None:
    order = edd_order(inst)
    agents = inst.agents
    for a, pi in enumerate(order):
        li, si = agents[pi].l, size[agents[pi].id]
        for pj in order[a + 1:]:
            sj = size[agents[pj].id]
            if li <= sj < si:
                return pi, pj
    return None


def edd_normalize(inst: IntervalInstance, p: Partition) -> Partition:
    """Swap agents between groups until the partition is earliest-due-date.

    Each swap moves the later agent into the larger group, so the vector of
    group sizes read from the last agent backwards grows lexicographically and
    the loop terminates.
    """
    _require_wonderful(inst, p)
    groups = [list(g) for g in p.groups]
    where = {a: gi for gi, g in enumerate(groups) for a in g}
    while True:
        size = {a: len(groups[gi]) for a, gi in where.items()}
        hit = _first_edd_violation(inst, size)
        if hit is None:
            break
        ai, aj = inst.agents[hit[0]].id, inst.agents[hit[1]].id
        gi, gj = where[ai], where[aj]
        groups[gi][groups[gi].index(ai)] = aj
        groups[gj][groups[gj].index(aj)] = ai
        where[ai], where[aj] = gj, gi
    return Partition(tuple(tuple(g) for g in groups), p.excluded)


def chunk_by_size(assignment: Sequence[tuple[AgentId, int]]) -> list[tuple[AgentId, ...]]:
    """Group agents that chose the same size into consecutive full coalitions.

    Every size's count must be divisible by the size.
    """
    by_size = defaultdict(list)
    for agent, s in assignment:
        by_size[s].append(agent)
    groups = []
    for s in sorted(by_size):
        members = by_size[s]
        if len(members) % s:
            raise InstanceError(f"{len(members)} agents chose size {s}")
        groups.extend(tuple(members[k:k + s]) for k in range(0, len(members), s))
    return groups


def solve_singletons(inst: IntervalInstance) -> Partition | None:
    """Fast path when every agent approves exactly one size."""
    require_valid(inst)
    if any(a.l != a.r for a in inst.agents):
        raise InstanceError("solve_singletons needs l == r for every agent")
    counts = Counter(a.l for a in inst.agents)
    if any(c % s for s, c in counts.items()):
        return None
    return Partition.of(chunk_by_size([(a.id, a.l) for a in inst.agents]))
