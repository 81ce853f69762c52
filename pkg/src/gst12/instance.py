"""Problem model: a (1,2)-metric given as a graph, requirement families, solutions.

Nodes are the integers ``0..n-1``.  A pair of nodes joined by an edge is at
distance 1, every other pair is at distance 2.  A solution is a set of
unordered node pairs; its cost is ``|F & E| + 2 |F - E|``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Integral
from typing import Iterable, Sequence

Pair = tuple[int, int]


def norm_pair(u: int, v: int) -> Pair:
    if u == v:
        raise ValueError(f"self-loop ({u}, {v})")
    return (u, v) if u < v else (v, u)


class DisjointSet:
    """Union-find whose class representative is always the smallest member."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass(frozen=True)
class MetricGraph:
    """Distance-1 pairs of a (1,2)-metric on ``n`` nodes."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative node count")
        edges = set()
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            edges.add(norm_pair(int(u), int(v)))
        object.__setattr__(self, "edges", frozenset(edges))
        adj: list[set] = [set() for _ in range(self.n)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    def neighbors(self, u: int) -> frozenset:
        return self._adj[u]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def check_node(self, u: int) -> None:
        if not (isinstance(u, Integral) and 0 <= u < self.n):
            raise ValueError(f"node {u!r} out of range for n={self.n}")


def propify(groups: Iterable[Iterable[int]]) -> tuple[frozenset, ...]:
    """Return the unique equivalent proper family.

    Overlapping groups are merged transitively, groups with fewer than two
    members are dropped.  The result is sorted by smallest member.
    """
    groups = [frozenset(g) for g in groups]
    nodes = sorted(set().union(*groups)) if groups else []
    index = {x: i for i, x in enumerate(nodes)}
    ds = DisjointSet(len(nodes))
    for g in groups:
        members = [index[x] for x in g]
        for x in members[1:]:
            ds.union(members[0], x)
    merged: dict[int, set] = {}
    for x in nodes:
        merged.setdefault(ds.find(index[x]), set()).add(x)
    proper = [frozenset(m) for m in merged.values() if len(m) >= 2]
    return tuple(sorted(proper, key=min))


@dataclass(frozen=True)
class Instance:
    """A GST[1,2] instance.  Requirements are made proper on construction."""

    graph: MetricGraph
    requirements: tuple = ()

    def __post_init__(self):
        groups = propify(self.requirements)
        for g in groups:
            for t in g:
                self.graph.check_node(t)
        object.__setattr__(self, "requirements", groups)

    @classmethod
    def build(cls, n: int, edges: Iterable[Sequence[int]] = (),
              groups: Iterable[Iterable[int]] = ()) -> "Instance":
        return cls(MetricGraph(n, frozenset(tuple(e) for e in edges)), tuple(groups))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def terminals(self) -> frozenset:
        return frozenset().union(*self.requirements) if self.requirements else frozenset()


def connection_set(pairs: Iterable[Sequence[int]]) -> frozenset:
    """Normalize an iterable of node pairs to a frozenset of sorted tuples."""
    return frozenset(norm_pair(*p) for p in pairs)


def connection_cost(g: MetricGraph, u: int, v: int) -> int:
    g.check_node(u)
    g.check_node(v)
    if u == v:
        raise ValueError(f"self-loop ({u}, {v})")
    return 1 if g.has_edge(u, v) else 2


def solution_cost(g: MetricGraph, f: Iterable[Sequence[int]]) -> int:
    return sum(connection_cost(g, u, v) for u, v in connection_set(f))


def is_valid_solution(inst: Instance, f: Iterable[Sequence[int]]) -> bool:
    ds = DisjointSet(inst.n)
    for u, v in f:
        ds.union(u, v)
    for group in inst.requirements:
        roots = {ds.find(t) for t in group}
        if len(roots) > 1:
            return False
    return True
