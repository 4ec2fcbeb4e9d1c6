"""Hardness gadgets linking size-2 approval instances to Orientation, and X3C to Orientation.

An agent approving exactly the sizes ``{i, j}`` is an edge between labels
``i`` and ``j``; sending the agent to a group of size ``i`` orients the edge
towards ``i``.  A wonderful partition exists iff the edges can be oriented so
that every label's in-degree is a multiple of the label.

The X3C construction builds such a graph from a set-cover instance.  Element
``i`` becomes nodes ``i*d`` and ``i*d + 1`` joined by ``i*d - 1`` parallel
edges, where ``d = max(2, most triples sharing one element)``.  Triple ``j``
becomes a node ``T = p*d + 4j + 4`` and a partner ``T - 3`` joined by ``T - 3``
parallel edges, plus one edge from ``T`` to each of its element nodes.  The
partner labels start at ``p*d + 5``, clear of every element label.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import chain

from .core import ApprovalInstance, InstanceError


@dataclass(frozen=True)
class OrientationInstance:
    max_label: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        for u, v in edges:
            if u == v:
                raise InstanceError(f"self-loop at {u}")
            if not (1 <= u <= self.max_label and 1 <= v <= self.max_label):
                raise InstanceError(f"edge ({u}, {v}) has a label outside [1, {self.max_label}]")
        object.__setattr__(self, "edges", edges)


# An orientation lists, per edge, the endpoint the edge points to.
Orientation = tuple


@dataclass(frozen=True)
class X3CInstance:
    k: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.k < 0:
            raise InstanceError("k must be nonnegative")
        triples = tuple(tuple(t) for t in self.triples)
        for t in triples:
            if len(t) != 3 or len(set(t)) != 3 or not all(1 <= e <= 3 * self.k for e in t):
                raise InstanceError(f"triple {t} is not three distinct elements of [1, {3 * self.k}]")
        object.__setattr__(self, "triples", triples)

    @property
    def universe(self) -> range:
        return range(1, 3 * self.k + 1)


class UncoveredElement(InstanceError):
    """Some element lies in no triple, so no exact cover can exist."""


@dataclass(frozen=True)
class GadgetMap:
    """Where each element and triple lives in the generated graph.

    Edge references are indices into ``OrientationInstance.edges``.
    """

    delta: int
    element_nodes: dict  # element -> (node, partner)
    element_edges: dict  # element -> parallel edge indices
    triple_nodes: dict  # triple index (1-based) -> (node, partner)
    triple_edges: dict  # triple index -> parallel edge indices
    membership: dict  # triple index -> ((edge index, element), ...)


def wp2_to_orientation(inst: ApprovalInstance) -> OrientationInstance:
    edges = []
    for agent, s in zip(inst.ids, inst.sets):
        if len(s) != 2:
            raise InstanceError(f"agent {agent!r} approves {sorted(s)}, need exactly two sizes")
        edges.append(tuple(sorted(s)))
    return OrientationInstance(inst.n, tuple(edges))


def orientation_to_wp(g: OrientationInstance) -> ApprovalInstance:
    return ApprovalInstance.from_sets([{u, v} for u, v in g.edges], n=len(g.edges))


def in_degrees(g: OrientationInstance, o: Orientation) -> Counter:
    if len(o) != len(g.edges):
        raise InstanceError(f"orientation has {len(o)} entries for {len(g.edges)} edges")
    for (u, v), h in zip(g.edges, o):
        if h not in (u, v):
            raise InstanceError(f"edge ({u}, {v}) cannot point to {h}")
    return Counter(o)


def verify_orientation(g: OrientationInstance, o: Orientation) -> bool:
    return all(d % label == 0 for label, d in in_degrees(g, o).items())


def x3c_to_orientation(x: X3CInstance) -> tuple[OrientationInstance, GadgetMap]:
    occurrences = Counter(chain.from_iterable(x.triples))
    missing = [e for e in x.universe if not occurrences[e]]
    if missing:
        raise UncoveredElement(f"elements {missing} appear in no triple")
    p = 3 * x.k
    d = max(max(occurrences.values(), default=0), 2)
    edges: list[tuple[int, int]] = []

    def add(u, v, times=1):
        first = len(edges)
        edges.extend([(u, v)] * times)
        return tuple(range(first, len(edges)))

    element_nodes, element_edges = {}, {}
    for i in x.universe:
        node = i * d
        element_nodes[i] = (node, node + 1)
        element_edges[i] = add(node, node + 1, node - 1)
    triple_nodes, triple_edges, membership = {}, {}, {}
    for j, t in enumerate(x.triples, start=1):
        node = p * d + 4 * j + 4
        partner = node - 3
        triple_nodes[j] = (node, partner)
        triple_edges[j] = add(node, partner, partner)
        membership[j] = tuple((add(node, i * d)[0], i) for i in t)
    top = p * d + 4 * len(x.triples) + 4 if x.triples else 1
    gmap = GadgetMap(d, element_nodes, element_edges, triple_nodes, triple_edges, membership)
    return OrientationInstance(top, tuple(edges)), gmap


def _check_cover(x: X3CInstance, cover) -> list[int]:
    cover = sorted(cover)
    if any(not 1 <= j <= len(x.triples) for j in cover) or len(set(cover)) != len(cover):
        raise InstanceError(f"cover {cover} does not name distinct triples")
    hit = sorted(chain.from_iterable(x.triples[j - 1] for j in cover))
    if hit != list(x.universe):
        raise InstanceError(f"cover {cover} is not an exact cover")
    return cover


def cover_to_orientation(x: X3CInstance, cover) -> Orientation:
    """Orientation of the gadget graph built from an exact cover."""
    chosen = set(_check_cover(x, cover))
    g, gmap = x3c_to_orientation(x)
    heads = [0] * len(g.edges)
    for i, (node, _) in gmap.element_nodes.items():
        for e in gmap.element_edges[i]:
            heads[e] = node
    for j, (node, partner) in gmap.triple_nodes.items():
        used = j in chosen
        for e in gmap.triple_edges[j]:
            heads[e] = partner if used else node
        for e, i in gmap.membership[j]:
            heads[e] = gmap.element_nodes[i][0] if used else node
    return tuple(heads)


def orientation_to_cover(x: X3CInstance, o: Orientation) -> tuple[int, ...]:
    """Triples whose membership edges all point at element nodes."""
    g, gmap = x3c_to_orientation(x)
    if not verify_orientation(g, o):
        raise InstanceError("orientation does not satisfy the divisibility constraints")
    indeg = in_degrees(g, o)
    for i, (node, _) in gmap.element_nodes.items():
        if indeg[node] != node:
            raise AssertionError(f"element node {node} has in-degree {indeg[node]}")
    for j, (node, _) in gmap.triple_nodes.items():
        if indeg[node] not in (0, node):
            raise AssertionError(f"triple node {node} has in-degree {indeg[node]}")
    cover = tuple(j for j, refs in gmap.membership.items()
                  if all(o[e] == gmap.element_nodes[i][0] for e, i in refs))
    _check_cover(x, cover)
    return cover
