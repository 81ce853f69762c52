"""Greedy star-collapsing heuristic of Rayward-Smith for STP[1,2].

While more than one terminal supernode remains, the loop performs the first
applicable move of

1. collapse an induced edge between two terminal supernodes,
2. collapse a star with the largest number ``s >= 3`` of terminal leaves,
3. join two terminal supernodes with one (cost-2) pair.

The same engine, restricted by an eligibility predicate, finishes the GST
pipeline in :mod:`gst12.gst`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .errors import InternalError, PreconditionError
from .instance import DisjointSet, Instance, Pair, connection_cost, norm_pair
from .residual import Eligible, ResidualState


class MoveKind(str, Enum):
    COLLAPSE_EDGE = "CollapseEdge"
    COLLAPSE_STAR = "CollapseStar"
    FINISH = "Finish"
    ANNIHILATE_PAIR = "AnnihilatePair"
    PREPROCESS_STAR = "PreprocessStar"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    pairs: tuple
    cost: int
    removed: tuple = ()
    center: Optional[int] = None
    leaves: tuple = ()

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "pairs": [list(p) for p in self.pairs], "cost": self.cost}
        if self.removed:
            d["removed"] = [list(p) for p in self.removed]
        if self.center is not None:
            d["center"] = self.center
            d["leaves"] = list(self.leaves)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Move":
        return cls(MoveKind(d["kind"]), tuple(tuple(p) for p in d["pairs"]), d["cost"],
                   tuple(tuple(p) for p in d.get("removed", ())), d.get("center"),
                   tuple(d.get("leaves", ())))


@dataclass
class Trace:
    moves: list = field(default_factory=list)

    @property
    def final_cost(self) -> int:
        return sum(m.cost for m in self.moves)

    def extend(self, other: "Trace") -> None:
        self.moves.extend(other.moves)

    def to_dict(self) -> dict:
        return {"final_cost": self.final_cost, "moves": [m.to_dict() for m in self.moves]}

    @classmethod
    def from_dict(cls, d: dict) -> "Trace":
        return cls([Move.from_dict(m) for m in d["moves"]])


def replay(inst: Instance, trace: Trace) -> frozenset:
    """Rebuild the connection set a trace describes, checking its bookkeeping."""
    f: set[Pair] = set()
    for i, move in enumerate(trace.moves):
        for p in move.removed:
            p = norm_pair(*p)
            if p not in f:
                raise ValueError(f"move {i} removes absent pair {p}")
            f.remove(p)
        for p in move.pairs:
            p = norm_pair(*p)
            if p in f:
                raise ValueError(f"move {i} adds duplicate pair {p}")
            f.add(p)
        delta = (sum(connection_cost(inst.graph, *p) for p in move.pairs)
                 - sum(connection_cost(inst.graph, *p) for p in move.removed))
        if delta != move.cost:
            raise ValueError(f"move {i} records cost {move.cost}, pairs give {delta}")
    ds = DisjointSet(inst.n)
    for u, v in sorted(f):
        if ds.find(u) == ds.find(v):
            raise ValueError("replayed solution contains a cycle")
        ds.union(u, v)
    return frozenset(f)


def _finishing_pair(state: ResidualState, eligible: Eligible) -> tuple[int, int] | None:
    for group in state.induced_requirements():
        cand = sorted(a for a in group if eligible is None or eligible(a))
        if len(cand) >= 2:
            return cand[0], cand[1]
    return None


def run_main_loop(state: ResidualState, eligible: Eligible = None,
                  done: Callable[[ResidualState], bool] | None = None) -> Trace:
    """Apply edge / max-star / finishing moves to ``state`` until ``done``.

    ``eligible`` restricts which terminal supernodes may take part in a move;
    ``done`` defaults to "every induced requirement is satisfied".
    """
    if done is None:
        done = ResidualState.is_done
    trace = Trace()
    while not done(state):
        edge = state.find_terminal_edge(eligible)
        if edge is not None:
            pairs, cost = state.collapse(edge)
            trace.moves.append(Move(MoveKind.COLLAPSE_EDGE, tuple(pairs), cost))
            continue
        star = state.find_max_star(eligible)
        if star is not None:
            pairs, cost = state.collapse_star(star)
            trace.moves.append(Move(MoveKind.COLLAPSE_STAR, tuple(pairs), cost,
                                    center=star.center, leaves=star.leaves))
            continue
        ends = _finishing_pair(state, eligible)
        if ends is None:
            raise InternalError("no applicable move while requirements remain unsatisfied")
        pair, cost = state.connect_pair(*ends)
        trace.moves.append(Move(MoveKind.FINISH, (pair,), cost))
    return trace


def solve_stp(inst: Instance) -> tuple[frozenset, Trace]:
    """Rayward-Smith heuristic on a single-group (Steiner tree) instance."""
    if len(inst.requirements) > 1:
        raise PreconditionError("solve_stp takes one required group; use solve_gst")
    state = ResidualState(inst)
    trace = run_main_loop(state)
    return frozenset(state.f), trace
