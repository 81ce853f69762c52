"""3/2-approximation for GST[1,2].

Pipeline: GE-preprocessing (collapse terminal edges and in-group stars while
tagging merged requirement sets safe/unsafe), annihilation of the unsafe sets
(each original pair is reconnected by its own cost-2 pair), then the
star-collapsing main loop on what survives.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalError
from .instance import DisjointSet, Instance, Pair
from .rayward_smith import Move, MoveKind, Trace, run_main_loop
from .residual import ResidualState, Star

SAFE = "safe"
UNSAFE = "unsafe"


@dataclass
class TaggedRequirement:
    members: frozenset
    tag: str
    origins: list = field(default_factory=list)
    internal_collapsed: list = field(default_factory=list)

    @property
    def safe(self) -> bool:
        return self.tag == SAFE


class _Groups:
    """Requirement groups as they merge during GE-preprocessing."""

    def __init__(self, inst: Instance):
        reqs = inst.requirements
        self.ds = DisjointSet(len(reqs))
        self.of_terminal = {t: i for i, g in enumerate(reqs) for t in g}
        self.records = {
            i: TaggedRequirement(g, SAFE if len(g) > 2 else UNSAFE, [g])
            for i, g in enumerate(reqs)
        }

    def group_of(self, state: ResidualState, supernode: int) -> int:
        for x in state.members(supernode):
            if x in self.of_terminal:
                return self.ds.find(self.of_terminal[x])
        raise InternalError(f"supernode {supernode} holds no terminal")

    def merge(self, i: int, j: int) -> int:
        a, b = self.records.pop(i), self.records.pop(j)
        root = self.ds.union(i, j)
        self.records[root] = TaggedRequirement(
            a.members | b.members,
            SAFE if (a.safe or b.safe) else UNSAFE,
            a.origins + b.origins,
            a.internal_collapsed + b.internal_collapsed,
        )
        return root


def _in_group_star(state: ResidualState, groups: _Groups) -> Star | None:
    """Smallest center with >= 3 leaves inside one safe group (largest such group)."""
    active = set().union(*state.induced_requirements())
    for c in state.centers():
        star = state.star_at(c, active.__contains__)
        by_group: dict[int, list] = {}
        for leaf, rep in zip(star.leaves, star.representatives):
            by_group.setdefault(groups.group_of(state, leaf), []).append((leaf, rep))
        best = None
        for gid in sorted(by_group):
            items = by_group[gid]
            if len(items) >= 3 and groups.records[gid].safe and (best is None or len(items) > len(best)):
                best = items
        if best is not None:
            return Star(c, tuple(l for l, _ in best), tuple(r for _, r in best))
    return None


def _terminal_edge(state: ResidualState, groups: _Groups, same_group: bool) -> tuple[int, int] | None:
    """Smallest induced edge between two active terminal supernodes that lie
    in the same (or, with ``same_group=False``, different) requirement sets."""
    active = set().union(*state.induced_requirements())
    for u, v in state._sorted_edges:
        a, b = state.find(u), state.find(v)
        if a == b or a not in active or b not in active:
            continue
        if (groups.group_of(state, a) == groups.group_of(state, b)) == same_group:
            return (a, b) if a < b else (b, a)
    return None


def ge_preprocess(state: ResidualState, trace: Trace | None = None) -> tuple[ResidualState, list]:
    """Run GE-preprocessing on ``state`` in place.

    Moves, first applicable wins: an edge inside one requirement set, a star
    with >= 3 leaves inside one safe set, an edge joining two sets.  Only
    terminals of unsatisfied sets count.  Returns the state and the tagged
    requirement sets ordered by smallest member.
    """
    groups = _Groups(state.inst)
    if trace is None:
        trace = Trace()
    while True:
        edge = _terminal_edge(state, groups, same_group=True)
        if edge is not None:
            gid = groups.group_of(state, edge[0])
            pairs, cost = state.collapse(edge)
            rec = groups.records[gid]
            rec.tag = SAFE
            rec.internal_collapsed.extend(pairs)
            trace.moves.append(Move(MoveKind.COLLAPSE_EDGE, tuple(pairs), cost))
            continue
        star = _in_group_star(state, groups)
        if star is not None:
            pairs, cost = state.collapse_star(star)
            groups.records[groups.group_of(state, star.center)].internal_collapsed.extend(pairs)
            trace.moves.append(Move(MoveKind.PREPROCESS_STAR, tuple(pairs), cost,
                                    center=star.center, leaves=star.leaves))
            continue
        edge = _terminal_edge(state, groups, same_group=False)
        if edge is not None:
            gi, gj = (groups.group_of(state, a) for a in edge)
            pairs, cost = state.collapse(edge)
            rec = groups.records[groups.merge(gi, gj)]
            rec.internal_collapsed.extend(pairs)
            trace.moves.append(Move(MoveKind.COLLAPSE_EDGE, tuple(pairs), cost))
            continue
        break
    tagged = sorted(groups.records.values(), key=lambda r: min(r.members))
    return state, tagged


def annihilate_unsafe(state: ResidualState, tagged: list, trace: Trace | None = None) -> ResidualState:
    """Dismantle every unsafe set: drop its GE collapses, join each original
    pair by one cost-2 pair, and stop considering those requirements."""
    if trace is None:
        trace = Trace()
    reqs = state.inst.requirements
    index = {g: i for i, g in enumerate(reqs)}
    dropped: set[int] = set()
    for rec in tagged:
        if rec.safe:
            continue
        roots = {state.find(t) for t in rec.members}
        if len(roots) == 1:
            continue  # already connected: nothing to fix
        if any(len(o) != 2 for o in rec.origins):
            raise InternalError(f"unsafe set {sorted(rec.members)} has a non-pair origin")
        in_f = set(state.f)
        if not all(p in in_f for p in rec.internal_collapsed):
            raise InternalError(f"unsafe set {sorted(rec.members)} lists pairs absent from f")
        removed = tuple(rec.internal_collapsed)
        state.remove_pairs(removed)
        for k, origin in enumerate(rec.origins):
            a, b = sorted(origin)
            pair, cost = state.connect_pair(a, b)
            if cost != 2:
                raise InternalError(f"pair {origin} has a cost-1 connection after GE-preprocessing")
            gone = removed if k == 0 else ()
            gone_cost = sum(1 if state.graph.has_edge(*p) else 2 for p in gone)
            trace.moves.append(Move(MoveKind.ANNIHILATE_PAIR, (pair,), cost - gone_cost, removed=gone))
            dropped.add(index[origin])
    state.active = [i for i in state.active if i not in dropped]
    return state


def solve_gst(inst: Instance, stars: str = "active") -> tuple[frozenset, Trace]:
    """GE-preprocessing, annihilation of unsafe sets, then the main loop.

    With ``stars="active"`` only terminal supernodes of unsatisfied surviving
    requirements take part in main-loop moves; ``stars="all"`` also admits
    those of satisfied surviving requirements.
    """
    if stars not in ("active", "all"):
        raise ValueError(f"stars must be 'active' or 'all', not {stars!r}")
    state = ResidualState(inst)
    trace = Trace()
    state, tagged = ge_preprocess(state, trace)
    annihilate_unsafe(state, tagged, trace)

    surviving = [t for i in state.active for t in state.inst.requirements[i]]
    cache: dict = {}

    def eligible(a: int) -> bool:
        # recomputed once per move; every move grows f
        if cache.get("size") != len(state.f):
            cache["size"] = len(state.f)
            if stars == "all":
                cache["ok"] = {state.find(t) for t in surviving}
            else:
                cache["ok"] = set().union(*state.induced_requirements())
        return a in cache["ok"]

    trace.extend(run_main_loop(state, eligible))
    return frozenset(state.f), trace
