"""Contraction state shared by all solvers.

A :class:`ResidualState` holds the partition of the nodes into supernodes
(classes of a union-find), the accumulated connection list ``f`` and the
subset of requirement groups still under consideration.  Supernodes are
named by their smallest member, so every choice below is reproducible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional

from .errors import PreconditionError
from .instance import DisjointSet, Instance, Pair, norm_pair, propify

Eligible = Optional[Callable[[int], bool]]


@dataclass(frozen=True)
class Star:
    """A non-terminal center and one representative edge per terminal leaf."""

    center: int
    leaves: tuple
    representatives: tuple

    @property
    def s(self) -> int:
        return len(self.leaves)


class ResidualState:
    def __init__(self, inst: Instance, active: Iterable[int] | None = None):
        self.inst = inst
        self.graph = inst.graph
        self.n = inst.n
        self.terminal = [False] * self.n
        for t in inst.terminals:
            self.terminal[t] = True
        self.active = sorted(range(len(inst.requirements)) if active is None else active)
        self.f: list[Pair] = []
        self._sorted_edges = sorted(self.graph.edges)
        self._rebuild()

    def _rebuild(self):
        self.ds = DisjointSet(self.n)
        self._size = {x: 1 for x in range(self.n)}
        self._has_terminal = {x: self.terminal[x] for x in range(self.n)}
        for u, v in self.f:
            self._union(u, v)

    def _union(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            raise PreconditionError(f"pair ({u}, {v}) closes a cycle")
        root = self.ds.union(ru, rv)
        other = rv if root == ru else ru
        self._size[root] += self._size.pop(other)
        self._has_terminal[root] = self._has_terminal[root] or self._has_terminal.pop(other)

    def copy(self) -> "ResidualState":
        clone = ResidualState(self.inst, self.active)
        clone.f = list(self.f)
        clone._rebuild()
        return clone

    # -- queries -------------------------------------------------------

    def find(self, x: int) -> int:
        return self.ds.find(x)

    def supernodes(self) -> dict[int, list[int]]:
        return self.ds.classes()

    def members(self, a: int) -> list[int]:
        root = self.find(a)
        return [x for x in range(self.n) if self.find(x) == root]

    def size(self, a: int) -> int:
        return self._size[self.find(a)]

    def is_terminal(self, a: int) -> bool:
        return self._has_terminal[self.find(a)]

    def terminal_supernodes(self) -> list[int]:
        return sorted(r for r, t in self._has_terminal.items() if t)

    def cost(self) -> int:
        return sum(1 if self.graph.has_edge(u, v) else 2 for u, v in self.f)

    def induced_requirements(self) -> tuple:
        """Unsatisfied groups over supernodes: prop of the images of active groups."""
        groups = self.inst.requirements
        return propify({self.find(t) for t in groups[i]} for i in self.active)

    def is_done(self) -> bool:
        return not self.induced_requirements()

    def induced_edges(self) -> dict[tuple[int, int], Pair]:
        """Map each adjacent supernode pair ``(A, B)``, ``A < B``, to its
        lexicographically smallest original edge."""
        out: dict[tuple[int, int], Pair] = {}
        for u, v in self._sorted_edges:
            a, b = self.find(u), self.find(v)
            if a != b:
                out.setdefault((a, b) if a < b else (b, a), (u, v))
        return out

    # -- moves ---------------------------------------------------------

    def add_pair(self, u: int, v: int) -> tuple[Pair, int]:
        pair = norm_pair(u, v)
        self._union(*pair)
        self.f.append(pair)
        return pair, (1 if self.graph.has_edge(*pair) else 2)

    def collapse(self, supernodes: Iterable[int], root: int | None = None) -> tuple[list[Pair], int]:
        """Join an induced-connected set of supernodes by a spanning tree of
        representative edges.  Returns the added pairs and their cost.

        The tree is grown breadth-first from ``root`` (default: the smallest
        supernode), so collapsing a star from its center adds the star edges.
        """
        group = {self.find(a) for a in supernodes}
        if len(group) <= 1:
            return [], 0
        start = min(group) if root is None else self.find(root)
        if start not in group:
            raise PreconditionError("root is not in the collapsed set")
        adj: dict[int, dict[int, Pair]] = {a: {} for a in group}
        for u, v in self._sorted_edges:
            a, b = self.find(u), self.find(v)
            if a != b and a in group and b in group:
                adj[a].setdefault(b, (u, v))
                adj[b].setdefault(a, (u, v))
        seen = {start}
        tree: list[Pair] = []
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in sorted(adj[a]):
                if b not in seen:
                    seen.add(b)
                    tree.append(adj[a][b])
                    queue.append(b)
        if seen != group:
            raise PreconditionError(f"supernodes {sorted(group)} are not connected in the induced graph")
        for u, v in tree:
            self.add_pair(u, v)
        return tree, len(tree)

    def connect_pair(self, a: int, b: int) -> tuple[Pair, int]:
        """Join two supernodes by one pair: the smallest original edge between
        their members if any, else the smallest pair of terminal members."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise PreconditionError(f"{a} and {b} are already in one supernode")
        ma, mb = self.members(ra), self.members(rb)
        edges = [norm_pair(u, v) for u, v in product(ma, mb) if self.graph.has_edge(u, v)]
        if edges:
            pair = min(edges)
        else:
            ta = [x for x in ma if self.terminal[x]] or ma
            tb = [x for x in mb if self.terminal[x]] or mb
            pair = min(norm_pair(u, v) for u, v in product(ta, tb))
        return self.add_pair(*pair)

    def remove_pairs(self, pairs: Iterable[Pair]) -> None:
        """Drop pairs from ``f`` and rebuild the partition."""
        drop = {norm_pair(*p) for p in pairs}
        missing = drop - set(self.f)
        if missing:
            raise PreconditionError(f"pairs {sorted(missing)} are not in the solution")
        self.f = [p for p in self.f if p not in drop]
        self._rebuild()

    # -- discovery -----------------------------------------------------

    def find_terminal_edge(self, eligible: Eligible = None) -> tuple[int, int] | None:
        for u, v in self._sorted_edges:
            a, b = self.find(u), self.find(v)
            if a == b or not (self.is_terminal(a) and self.is_terminal(b)):
                continue
            if eligible is not None and not (eligible(a) and eligible(b)):
                continue
            return (a, b) if a < b else (b, a)
        return None

    def centers(self) -> list[int]:
        """Non-terminal nodes that are still singleton supernodes."""
        return [c for c in range(self.n)
                if not self.terminal[c] and self.find(c) == c and self._size[c] == 1]

    def star_at(self, c: int, eligible: Eligible = None) -> Star:
        reps: dict[int, Pair] = {}
        for x in sorted(self.graph.neighbors(c)):
            leaf = self.find(x)
            if leaf == c or not self.is_terminal(leaf):
                continue
            if eligible is not None and not eligible(leaf):
                continue
            reps.setdefault(leaf, norm_pair(c, x))
        leaves = tuple(sorted(reps))
        return Star(c, leaves, tuple(reps[l] for l in leaves))

    def find_max_star(self, eligible: Eligible = None) -> Star | None:
        best = None
        for c in self.centers():
            star = self.star_at(c, eligible)
            if star.s >= 3 and (best is None or star.s > best.s):
                best = star
        return best

    def collapse_star(self, star: Star) -> tuple[list[Pair], int]:
        return self.collapse((star.center, *star.leaves), root=star.center)
