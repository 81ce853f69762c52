"""Exact optima at desk scale.

``steiner_tree_opt`` runs Dreyfus-Wagner directly on the complete {1,2}-cost
graph (it is already a metric, so no shortest-path closure is needed).
``steiner_forest_opt`` takes one DP table over all terminals and minimizes
over partitions of the requirement groups into blocks.  ``brute_force_opt``
is an independent exhaustive search used to check the other two.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import ResourceLimitError
from .instance import DisjointSet, Instance, MetricGraph, Pair, connection_cost, norm_pair

MAX_TERMINALS = 14


@dataclass(frozen=True)
class OptimalForest:
    cost: int
    pairs: frozenset
    grouping: tuple  # blocks of requirement groups, one tree per block


def distance_matrix(g: MetricGraph) -> np.ndarray:
    d = np.full((g.n, g.n), 2, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for u, v in g.edges:
        d[u, v] = d[v, u] = 1
    return d


@lru_cache(maxsize=None)
def _submasks(k: int) -> tuple:
    """For every mask S, the proper submasks that contain the lowest bit of S."""
    out = [np.empty(0, dtype=np.int64)] * (1 << k)
    for s in range(1, 1 << k):
        low = s & -s
        rest = s ^ low
        subs = []
        t = rest
        while True:
            cand = t | low
            if cand != s:
                subs.append(cand)
            if t == 0:
                break
            t = (t - 1) & rest
        out[s] = np.array(sorted(subs), dtype=np.int64)
    return tuple(out)


class SteinerTable:
    """Dreyfus-Wagner table over an ordered terminal list.

    ``dp[S, v]`` is the cheapest tree spanning terminals ``S`` plus node ``v``;
    ``merge[S, v]`` is the same restricted to trees in which ``v`` joins two
    nonempty sub-trees (or ``v`` is the single terminal of ``S``).
    """

    def __init__(self, g: MetricGraph, terminals: Iterable[int]):
        self.graph = g
        self.terminals = sorted(terminals)
        k = len(self.terminals)
        if k == 0:
            raise ValueError("empty terminal set")
        if k > MAX_TERMINALS:
            raise ResourceLimitError(f"{k} terminals exceed the oracle limit of {MAX_TERMINALS}")
        self.index = {t: i for i, t in enumerate(self.terminals)}
        n = g.n
        self.d = d = distance_matrix(g)
        big = np.iinfo(np.int64).max // 4
        self.merge = merge = np.full((1 << k, n), big, dtype=np.int64)
        self.dp = dp = np.full((1 << k, n), big, dtype=np.int64)
        subs = _submasks(k)
        for s in range(1, 1 << k):
            if s & (s - 1) == 0:
                merge[s, self.terminals[s.bit_length() - 1]] = 0
            else:
                t = subs[s]
                merge[s] = (dp[t] + dp[s ^ t]).min(axis=0)
            dp[s] = (merge[s][:, None] + d).min(axis=0)

    def mask(self, nodes: Iterable[int]) -> int:
        m = 0
        for t in nodes:
            m |= 1 << self.index[t]
        return m

    def cost(self, mask: int) -> int:
        return int(self.dp[mask].min())

    def tree(self, mask: int) -> list[Pair]:
        root = int(np.argmin(self.dp[mask]))
        pairs: list[Pair] = []
        self._walk(mask, root, pairs)
        return pairs

    def _walk(self, s: int, v: int, out: list) -> None:
        dp, merge, d = self.dp, self.merge, self.d
        if dp[s, v] != merge[s, v]:
            u = int(np.flatnonzero(merge[s] + d[:, v] == dp[s, v])[0])
            out.append(norm_pair(u, v))
            v = u
        if s & (s - 1) == 0:
            return
        for t in _submasks(len(self.terminals))[s]:
            t = int(t)
            if dp[t, v] + dp[s ^ t, v] == merge[s, v]:
                self._walk(t, v, out)
                self._walk(s ^ t, v, out)
                return
        raise AssertionError("inconsistent Dreyfus-Wagner table")


def steiner_tree_opt(g: MetricGraph, terminals: Iterable[int]) -> tuple[int, frozenset]:
    terminals = sorted(set(terminals))
    if not terminals:
        raise ValueError("empty terminal set")
    for t in terminals:
        g.check_node(t)
    table = SteinerTable(g, terminals)
    full = (1 << len(terminals)) - 1
    pairs = frozenset(table.tree(full))
    return table.cost(full), pairs


def set_partitions(m: int):
    """All partitions of ``range(m)``, finest first (ties by restricted-growth order)."""
    parts = []

    def rec(i, labels, nblocks):
        if i == m:
            parts.append(tuple(labels))
            return
        for b in range(nblocks + 1):
            labels.append(b)
            rec(i + 1, labels, max(nblocks, b + 1))
            labels.pop()

    rec(0, [], 0)
    parts.sort(key=lambda lab: -(max(lab) + 1) if lab else 0)
    for lab in parts:
        blocks: dict[int, list] = {}
        for i, b in enumerate(lab):
            blocks.setdefault(b, []).append(i)
        yield [blocks[b] for b in sorted(blocks)]


def steiner_forest_opt(inst: Instance, max_groups: int = 8) -> OptimalForest:
    groups = inst.requirements
    if not groups:
        return OptimalForest(0, frozenset(), ())
    if len(groups) > max_groups:
        raise ResourceLimitError(f"{len(groups)} groups exceed the oracle limit of {max_groups}")
    table = SteinerTable(inst.graph, inst.terminals)
    masks = [table.mask(g) for g in groups]
    block_cost: dict[int, int] = {}

    def cost_of(block):
        m = 0
        for i in block:
            m |= masks[i]
        if m not in block_cost:
            block_cost[m] = table.cost(m)
        return block_cost[m], m

    best = None
    for blocks in set_partitions(len(groups)):
        total = sum(cost_of(b)[0] for b in blocks)
        if best is None or total < best[0]:
            best = (total, blocks)
    total, blocks = best
    pairs: set[Pair] = set()
    for b in blocks:
        pairs.update(table.tree(cost_of(b)[1]))
    grouping = tuple(tuple(groups[i] for i in b) for b in blocks)
    return OptimalForest(total, frozenset(pairs), grouping)


def brute_force_opt(inst: Instance, pair_budget: int | None = None, max_nodes: int = 7) -> int:
    """Exhaustive minimum over acyclic pair sets (forests) of the complete graph.

    ``pair_budget`` caps the cost searched; by default it is the cost of
    joining every group by a star of cost-2 pairs, which is always feasible.
    """
    n = inst.n
    if n > max_nodes:
        raise ResourceLimitError(f"brute force limited to {max_nodes} nodes, got {n}")
    groups = [sorted(g) for g in inst.requirements]
    if not groups:
        return 0
    bound = 2 * sum(len(g) - 1 for g in groups)
    if pair_budget is not None:
        bound = min(bound, pair_budget)
    g = inst.graph
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    # cheap pairs first so good solutions are found early
    pairs.sort(key=lambda p: (connection_cost(g, *p), p))
    costs = [connection_cost(g, *p) for p in pairs]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def valid():
        return all(find(t) == find(grp[0]) for grp in groups for t in grp[1:])

    best = [bound + 1]

    def dfs(i, cost):
        if valid():
            best[0] = min(best[0], cost)
            return
        if i == len(pairs) or cost + 1 >= best[0]:
            return
        u, v = pairs[i]
        ru, rv = find(u), find(v)
        if ru != rv and cost + costs[i] < best[0]:
            parent[rv] = ru
            dfs(i + 1, cost + costs[i])
            parent[rv] = rv
        dfs(i + 1, cost)

    dfs(0, 0)
    if best[0] > bound:
        raise ResourceLimitError(f"no solution within budget {bound}")
    return best[0]


def skeleton_cost(g: MetricGraph, pairs: Iterable[Pair]) -> int:
    return sum(1 for u, v in pairs if g.has_edge(u, v))


def components(pairs: Iterable[Pair], n: int) -> list[frozenset]:
    """Node sets of the components of ``(V, pairs)`` that contain a pair."""
    ds = DisjointSet(n)
    touched = set()
    for u, v in pairs:
        ds.union(u, v)
        touched.update((u, v))
    out: dict[int, set] = {}
    for x in touched:
        out.setdefault(ds.find(x), set()).add(x)
    return sorted((frozenset(c) for c in out.values()), key=min)
