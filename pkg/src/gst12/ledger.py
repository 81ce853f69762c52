"""Numerical audit of the potential-function analysis.

The audit keeps a *reference solution* ``T_ref`` (initially an optimal tree)
over the supernodes of a replayed residual state, and a potential on its
objects:

* every skeleton edge (cost-1 connection of ``T_ref``) carries 1/3,
* every C-comp (component of the skeleton) carries a value in {0, -1/2, -2/3},
* every S-comp (Steiner full component, keyed by its Steiner point) carries
  0 or -1/6.

``PromCost = CA + CR + P`` where ``CA`` is what the heuristic paid so far and
``CR`` the cost of ``T_ref``.  All values are exact :class:`~fractions.Fraction`.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from .errors import PreconditionError
from .gst import ge_preprocess
from .instance import DisjointSet, Instance, Pair, norm_pair
from .oracle import OptimalForest, components
from .rayward_smith import MoveKind, Trace, replay
from .residual import ResidualState

EDGE_P = Fraction(1, 3)
SPLIT_P = Fraction(-2, 3)
RAISED_P = Fraction(-1, 2)
SCOMP_P = Fraction(-1, 6)


class ReferenceSolution:
    """``T_ref``: original node pairs read as connections between supernodes."""

    def __init__(self, state: ResidualState, pairs: Iterable[Pair]):
        self.state = state
        g = state.graph
        self.pairs: dict[Pair, int] = {}
        for p in pairs:
            p = norm_pair(*p)
            self.pairs[p] = 1 if g.has_edge(*p) else 2

    def copy(self) -> "ReferenceSolution":
        clone = ReferenceSolution.__new__(ReferenceSolution)
        clone.state = self.state
        clone.pairs = dict(self.pairs)
        return clone

    @property
    def cost(self) -> int:
        return sum(self.pairs.values())

    @property
    def skeleton(self) -> list[Pair]:
        return sorted(p for p, c in self.pairs.items() if c == 1)

    def ends(self, p: Pair) -> tuple[int, int]:
        return self.state.find(p[0]), self.state.find(p[1])

    def is_steiner(self, a: int) -> bool:
        return not self.state.is_terminal(a)

    def nodes(self) -> set[int]:
        out = set(self.state.terminal_supernodes())
        for p in self.pairs:
            out.update(self.ends(p))
        return out

    def adjacency(self, skeleton_only: bool = False) -> dict[int, list]:
        adj: dict[int, list] = {a: [] for a in self.nodes()}
        for p, c in sorted(self.pairs.items()):
            if skeleton_only and c != 1:
                continue
            a, b = self.ends(p)
            adj[a].append((b, p))
            adj[b].append((a, p))
        return adj

    def steiner_points(self) -> list[int]:
        return sorted(a for a in self.nodes() if self.is_steiner(a))

    def side(self, start: int, without: Iterable[Pair] = ()) -> set[int]:
        """Nodes reachable from ``start`` when the pairs ``without`` are ignored."""
        skip = set(without)
        adj = self.adjacency()
        seen = {start}
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b, p in adj[a]:
                if p not in skip and b not in seen:
                    seen.add(b)
                    queue.append(b)
        return seen

    def ccomps(self) -> list[frozenset]:
        """Skeleton components, each as the frozenset of its edges."""
        ds = DisjointSet(self.state.n)
        skel = self.skeleton
        for p in skel:
            a, b = self.ends(p)
            ds.union(a, b)
        out: dict[int, set] = {}
        for p in skel:
            out.setdefault(ds.find(self.ends(p)[0]), set()).add(p)
        return sorted((frozenset(c) for c in out.values()), key=min)

    def comp_nodes(self, comp: Iterable[Pair]) -> set[int]:
        return {a for p in comp for a in self.ends(p)}

    def new_connection(self, a: int, b: int) -> tuple[Pair, int]:
        """Cheapest representative pair between supernodes ``a`` and ``b``."""
        st = self.state
        ma, mb = st.members(a), st.members(b)
        edges = [norm_pair(u, v) for u, v in product(ma, mb) if st.graph.has_edge(u, v)]
        if edges:
            return min(edges), 1
        ta = [x for x in ma if st.terminal[x]] or ma
        tb = [x for x in mb if st.terminal[x]] or mb
        return min(norm_pair(u, v) for u, v in product(ta, tb)), 2


@dataclass
class PotentialState:
    ca: int = 0
    ccomp_p: dict = field(default_factory=dict)
    scomp_p: dict = field(default_factory=dict)
    fcomp_pg: dict = field(default_factory=dict)
    redistributed: bool = False

    @property
    def pc(self) -> Fraction:
        return sum(self.ccomp_p.values(), Fraction(0))

    @property
    def ps(self) -> Fraction:
        return sum(self.scomp_p.values(), Fraction(0))

    @property
    def pf(self) -> Fraction:
        return sum(self.fcomp_pg.values(), Fraction(0))

    def trivial(self, comp) -> bool:
        # before redistribution a C-comp with < 3 edges holds 0, afterwards one with <= 1 edge
        return len(comp) <= 1 if self.redistributed else len(comp) < 3


def potential(ref: ReferenceSolution, pot: PotentialState) -> Fraction:
    return EDGE_P * len(ref.skeleton) + pot.pc + pot.ps


def prom_cost(ref: ReferenceSolution, pot: PotentialState) -> Fraction:
    return pot.ca + ref.cost + potential(ref, pot)


def prom_cost_prime(ref: ReferenceSolution, pot: PotentialState) -> Fraction:
    return prom_cost(ref, pot) + pot.pf


@dataclass
class StepLog:
    kind: str
    d_cr: Fraction
    d_pe: Fraction
    d_pc: Fraction
    d_ps: Fraction = Fraction(0)

    @property
    def ok(self) -> bool:
        return self.d_cr + self.d_pe + self.d_pc <= 0

    def to_dict(self) -> dict:
        return {k: str(v) if isinstance(v, Fraction) else v for k, v in asdict(self).items()} | {"ok": self.ok}


def _tallies(ref, pot):
    return Fraction(ref.cost), EDGE_P * len(ref.skeleton), pot.pc, pot.ps


def _reassign(ref: ReferenceSolution, pot: PotentialState, overrides=None) -> None:
    """Recompute C-comp/S-comp potentials after ``ref`` changed.

    A new C-comp inherits the smallest potential among the old C-comps it
    shares an edge with (0 if none), trivial C-comps hold 0, and
    ``overrides(comp)`` may impose a value.  S-comps of vanished Steiner
    points are dropped.
    """
    old = pot.ccomp_p
    new: dict[frozenset, Fraction] = {}
    for comp in ref.ccomps():
        forced = overrides(comp) if overrides else None
        if forced is not None:
            new[comp] = forced
            continue
        inherited = [p for c, p in old.items() if c & comp]
        value = min(inherited, default=Fraction(0))
        new[comp] = Fraction(0) if pot.trivial(comp) else min(value, Fraction(0))
    pot.ccomp_p = new
    steiner_in_skeleton = {a for p in ref.skeleton for a in ref.ends(p) if ref.is_steiner(a)}
    pot.scomp_p = {s: v for s, v in pot.scomp_p.items() if s in steiner_in_skeleton}


def _split_and_join(ref: ReferenceSolution, cut: list[Pair], a: int, b: int) -> tuple[set, set]:
    """Remove ``cut``, then reconnect the side of ``a`` with the side of ``b``
    through their smallest terminal supernodes.  Returns both sides as they
    were before reconnecting."""
    for p in cut:
        del ref.pairs[p]
    side_a, side_b = ref.side(a), ref.side(b)
    ta = sorted(x for x in side_a if not ref.is_steiner(x))
    tb = sorted(x for x in side_b if not ref.is_steiner(x))
    if ta and tb and not (side_a & side_b):
        p, c = ref.new_connection(ta[0], tb[0])
        ref.pairs[p] = c
    return side_a, side_b


def _normal_step(ref: ReferenceSolution, pot: PotentialState) -> StepLog | None:
    """Apply one normalization step (prune, reroute, path, bridge) or return None."""
    adj = ref.adjacency()
    steiner = [a for a in sorted(adj) if ref.is_steiner(a)]
    before = _tallies(ref, pot)

    def log(kind):
        after = _tallies(ref, pot)
        return StepLog(kind, *(x - y for x, y in zip(after, before)))

    for s in steiner:
        if len(adj[s]) == 1:
            del ref.pairs[adj[s][0][1]]
            _reassign(ref, pot)
            return log("prune")
    for s in steiner:
        for x, p in adj[s]:
            if ref.pairs[p] == 2:
                _split_and_join(ref, [p], s, x)
                _reassign(ref, pot)
                return log("reroute")
    for s in steiner:
        if len(adj[s]) == 2:
            (a, pa), (b, pb) = adj[s]
            comp = next(c for c in ref.ccomps() if pa in c)
            _split_and_join(ref, [pa, pb], a, b)
            touched = comp - {pa, pb}
            _reassign(ref, pot, lambda c: Fraction(0) if c & touched else None)
            return log("path")
    for s in steiner:
        for x, p in adj[s]:
            if ref.is_steiner(x) and ref.pairs[p] == 1:
                comp = next(c for c in ref.ccomps() if p in c)
                old_p = pot.ccomp_p.get(comp, Fraction(0))
                side_s, _ = _split_and_join(ref, [p], s, x)
                rest = comp - {p}
                s_side = {q for q in rest if ref.ends(q)[0] in side_s}
                x_side = rest - s_side

                def bridge_rule(c):
                    if c & s_side and c & x_side:
                        return old_p
                    if c & x_side:
                        return SPLIT_P
                    if c & s_side:
                        return old_p
                    return None

                _reassign(ref, pot, bridge_rule)
                return log("bridge")
    return None


def _normalize(ref: ReferenceSolution, pot: PotentialState) -> list[StepLog]:
    steps = []
    while True:
        step = _normal_step(ref, pot)
        if step is None:
            return steps
        steps.append(step)


def make_bridgeless(ref: ReferenceSolution, pot: PotentialState):
    """Normalize ``ref`` in place until no Steiner point is adjacent to another
    and every Steiner point has skeleton degree >= 3.

    Steps, first applicable wins: prune a Steiner leaf; reroute a cost-2
    connection at a Steiner point through terminals; Path step at a Steiner
    point of degree 2; Bridge step on a Steiner-Steiner edge.  Returns
    ``(ref, pot, log)``.
    """
    if ref.state.find_terminal_edge() is not None:
        raise PreconditionError("an edge between terminals is still collapsible")
    return ref, pot, _normalize(ref, pot)


def bridgeless_violations(ref: ReferenceSolution, pot: PotentialState) -> list[str]:
    out = []
    skel_adj = ref.adjacency(skeleton_only=True)
    all_adj = ref.adjacency()
    for s in ref.steiner_points():
        if len(all_adj[s]) < 3 or len(skel_adj[s]) != len(all_adj[s]):
            out.append(f"Steiner point {s} has skeleton degree {len(skel_adj[s])}")
        for x, _ in skel_adj[s]:
            if ref.is_steiner(x):
                out.append(f"Steiner points {s} and {x} are adjacent")
    for comp in ref.ccomps():
        p = pot.ccomp_p.get(comp, Fraction(0))
        if p < SPLIT_P:
            out.append(f"C-comp potential {p} below -2/3")
        if len(comp) < 3 and p != 0:
            out.append(f"C-comp with {len(comp)} edges holds {p}")
    return out


def redistribute(ref: ReferenceSolution, pot: PotentialState) -> PotentialState:
    """Raise every C-comp at -2/3 to -1/2 and charge -1/6 to its first S-comp."""
    for comp, p in sorted(pot.ccomp_p.items(), key=lambda kv: min(kv[0])):
        if p != SPLIT_P:
            continue
        steiner = sorted(a for a in ref.comp_nodes(comp) if ref.is_steiner(a))
        if not steiner:
            continue
        pot.ccomp_p[comp] = RAISED_P
        pot.scomp_p[steiner[0]] = SCOMP_P
    pot.redistributed = True
    return pot


def _merge_surgery(ref: ReferenceSolution, pot: PotentialState, pairs) -> list[Pair]:
    """Remove connections of ``T_ref`` so that contracting the supernodes the
    move joins leaves a tree; cost-2 connections go first, then skeleton
    edges whose removal keeps the larger C-comp part biggest."""
    st = ref.state
    merged = {st.find(x) for p in pairs for x in p}
    nodes = ref.nodes()
    marks = merged & nodes
    removed: list[Pair] = []

    def separates(p):
        a, b = ref.ends(p)
        side_a = ref.side(a, [p])
        if b in side_a:
            return False
        return bool(side_a & marks) and bool(ref.side(b, [p]) & marks)

    def skeleton_key(p):
        comp = next(c for c in ref.ccomps() if p in c)
        a, _ = ref.ends(p)
        side = ref.side(a, [p])
        inside = sum(1 for q in comp if q != p and set(ref.ends(q)) <= side)
        return -max(inside, len(comp) - 1 - inside)

    while True:
        cands = [p for p in sorted(ref.pairs) if separates(p)]
        if not cands:
            break
        costly = [p for p in cands if ref.pairs[p] == 2]
        pick = costly[0] if costly else min(cands, key=lambda p: (skeleton_key(p), p))
        del ref.pairs[pick]
        removed.append(pick)
    return removed


def apply_move(ref: ReferenceSolution, pot: PotentialState, pairs, cost: int) -> None:
    """Charge a collapse/finish move: surgery on ``T_ref``, then contraction."""
    _merge_surgery(ref, pot, pairs)
    st = ref.state
    for u, v in pairs:
        try:
            st.add_pair(u, v)
        except PreconditionError as exc:
            raise ValueError(f"trace does not replay: {exc}") from None
    pot.ca += cost
    _reassign(ref, pot)


@dataclass
class AuditRow:
    index: int
    kind: str
    d_ca: Fraction
    d_cr: Fraction
    d_p: Fraction
    prom_cost: Fraction

    @property
    def monotone(self) -> bool:
        return self.d_ca + self.d_cr + self.d_p <= 0

    def to_dict(self) -> dict:
        return {"step": self.index, "move": self.kind, "d_ca": str(self.d_ca),
                "d_cr": str(self.d_cr), "d_p": str(self.d_p),
                "prom_cost": str(self.prom_cost), "monotone": self.monotone}


@dataclass
class AuditReport:
    opt_cost: int
    skeleton: int
    alg_cost: int
    initial_prom_cost: Fraction
    rows: list
    bridgeless_steps: list
    bridgeless_ok: bool
    final_ca: int
    final_cr: int
    final_p: Fraction

    @property
    def hard_facts(self) -> dict:
        return {
            "final_cr_zero": self.final_cr == 0,
            "final_p_zero": self.final_p == 0,
            "ca_equals_alg": self.final_ca == self.alg_cost,
            "ca_within_initial_prom": self.final_ca <= self.initial_prom_cost,
        }

    @property
    def ok(self) -> bool:
        return all(self.hard_facts.values())

    @property
    def move_rows(self) -> list:
        return [r for r in self.rows if r.index >= 0]

    @property
    def monotone_rate(self) -> float:
        rows = self.move_rows
        return 1.0 if not rows else sum(r.monotone for r in rows) / len(rows)

    def to_dict(self) -> dict:
        return {
            "opt_cost": self.opt_cost, "skeleton": self.skeleton, "alg_cost": self.alg_cost,
            "initial_prom_cost": str(self.initial_prom_cost),
            "final": {"ca": self.final_ca, "cr": self.final_cr, "p": str(self.final_p)},
            "hard_facts": self.hard_facts, "monotone_rate": self.monotone_rate,
            "bridgeless_ok": self.bridgeless_ok,
            "bridgeless_steps": [s.to_dict() for s in self.bridgeless_steps],
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


_STP_KINDS = {MoveKind.COLLAPSE_EDGE, MoveKind.COLLAPSE_STAR, MoveKind.FINISH}


def audit_stp_run(inst: Instance, opt: OptimalForest, trace: Trace) -> AuditReport:
    """Replay a Rayward-Smith trace against ``T_ref = opt`` and track PromCost."""
    if len(inst.requirements) > 1:
        raise PreconditionError("audit_stp_run takes a single-group instance")
    replay(inst, trace)
    if any(m.kind not in _STP_KINDS for m in trace.moves):
        raise ValueError("trace contains moves the STP heuristic does not make")
    state = ResidualState(inst)
    ref = ReferenceSolution(state, opt.pairs)
    pot = PotentialState()
    initial = prom_cost(ref, pot)
    rows: list[AuditRow] = []
    steps: list[StepLog] = []
    bridgeless_ok = True
    normalized = False

    def record(index, kind, fn):
        before = (pot.ca, Fraction(ref.cost), potential(ref, pot))
        fn()
        after = (pot.ca, Fraction(ref.cost), potential(ref, pot))
        rows.append(AuditRow(index, kind, *(a - b for a, b in zip(after, before)), prom_cost(ref, pot)))

    def normalize():
        nonlocal bridgeless_ok
        _, _, log = make_bridgeless(ref, pot)
        steps.extend(log)
        bridgeless_ok = bridgeless_ok and all(s.ok for s in log) and not bridgeless_violations(ref, pot)

    for i, move in enumerate(trace.moves):
        if not normalized and move.kind != MoveKind.COLLAPSE_EDGE:
            record(-1, "Bridgeless", normalize)
            normalized = True
        if move.kind == MoveKind.COLLAPSE_STAR and len(move.leaves) == 3 and not pot.redistributed:
            record(-1, "Redistribute", lambda: redistribute(ref, pot))

        def step(move=move):
            apply_move(ref, pot, move.pairs, move.cost)
            if normalized:
                steps_after = _normalize(ref, pot)
                steps.extend(steps_after)

        record(i, move.kind.value, step)
    if not normalized:
        record(-1, "Bridgeless", normalize)
    return AuditReport(opt.cost, sum(1 for p in opt.pairs if inst.graph.has_edge(*p)),
                       trace.final_cost, initial, rows, steps, bridgeless_ok,
                       pot.ca, ref.cost, potential(ref, pot))


# -- GST: static p_g checks -------------------------------------------------

def normalize_forest_gst(inst: Instance, opt: OptimalForest) -> OptimalForest:
    """Prune Steiner leaves, and replace degree-2 Steiner points and cost-2
    pairs not joining two terminals of one set by terminal pairs inside sets."""
    g = inst.graph
    group_of = {t: i for i, grp in enumerate(inst.requirements) for t in grp}
    pairs = {norm_pair(*p) for p in opt.pairs}

    def adjacency():
        adj: dict[int, list] = {}
        for p in sorted(pairs):
            u, v = p
            adj.setdefault(u, []).append((v, p))
            adj.setdefault(v, []).append((u, p))
        return adj

    def reach(start):
        adj = adjacency()
        seen = {start}
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b, _ in adj.get(a, ()):
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return seen

    def rejoin(a, b):
        side_a, side_b = reach(a), reach(b)
        cands = [norm_pair(x, y) for x in side_a for y in side_b
                 if x in group_of and y in group_of and group_of[x] == group_of[y]]
        if cands:
            pairs.add(min(cands, key=lambda p: (1 if g.has_edge(*p) else 2, p)))

    def steiner(x):
        return x not in group_of

    while True:
        adj = adjacency()
        leaf = next((x for x in sorted(adj) if steiner(x) and len(adj[x]) == 1), None)
        if leaf is not None:
            pairs.discard(adj[leaf][0][1])
            continue
        bad = next((p for p in sorted(pairs) if not g.has_edge(*p)
                    and not (p[0] in group_of and group_of.get(p[1]) == group_of[p[0]])), None)
        if bad is not None:
            pairs.discard(bad)
            rejoin(*bad)
            continue
        mid = next((x for x in sorted(adj) if steiner(x) and len(adj[x]) == 2), None)
        if mid is not None:
            (a, pa), (b, pb) = adj[mid]
            pairs.difference_update((pa, pb))
            rejoin(a, b)
            continue
        break
    cost = sum(1 if g.has_edge(*p) else 2 for p in pairs)
    comps = components(pairs, inst.n)
    grouping = tuple(tuple(grp for grp in inst.requirements if grp <= c) for c in comps)
    return OptimalForest(cost, frozenset(pairs), grouping)


def pg_of_fcomp(inst: Instance, pairs: Iterable[Pair], c_comp: Fraction = SPLIT_P) -> Fraction:
    """Sum of p_g over one F-comp: 1/2 per edge between terminals, 1/6 per
    other edge, 1 per non-edge, plus ``c_comp`` per C-comp (a skeleton
    component that contains a Steiner node)."""
    g = inst.graph
    terms = inst.terminals
    pairs = [norm_pair(*p) for p in pairs]
    total = Fraction(0)
    for u, v in pairs:
        if not g.has_edge(u, v):
            total += 1
        elif u in terms and v in terms:
            total += Fraction(1, 2)
        else:
            total += Fraction(1, 6)
    skeleton = [p for p in pairs if g.has_edge(*p)]
    for comp in components(skeleton, inst.n):
        if any(x not in terms for x in comp):
            total += c_comp
    return total


@dataclass
class SafetyRow:
    nodes: tuple
    groups: tuple
    pg_literal: Fraction
    pg_proof: Fraction
    threshold: Fraction

    @property
    def has_pair_group(self) -> bool:
        return any(len(g) == 2 for g in self.groups)

    @property
    def holds_literal(self) -> bool:
        return self.pg_literal >= self.threshold

    @property
    def holds_proof(self) -> bool:
        return self.pg_proof >= self.threshold

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "groups": [sorted(g) for g in self.groups],
                "pg_literal": str(self.pg_literal), "pg_proof": str(self.pg_proof),
                "threshold": str(self.threshold), "holds_literal": self.holds_literal,
                "holds_proof": self.holds_proof}


def check_safety_lemmas(inst: Instance, opt: OptimalForest) -> list[SafetyRow]:
    """p_g of every F-comp of the normalized optimum under the C-comp term
    -2/3 (as assigned) and +2/3 (the sign under which the safety bounds add up).

    The threshold is 3/2 when the component holds a set of more than two
    terminals and 1 otherwise.  Report only; nothing is asserted here.
    """
    probe = Trace()
    ge_preprocess(ResidualState(inst), probe)
    if probe.moves:
        raise PreconditionError("GE-preprocessing still has moves on this instance")
    norm = normalize_forest_gst(inst, opt)
    rows = []
    for comp, groups in zip(components(norm.pairs, inst.n), norm.grouping):
        pairs = [p for p in norm.pairs if p[0] in comp]
        need = Fraction(3, 2) if any(len(grp) > 2 for grp in groups) else Fraction(1)
        rows.append(SafetyRow(tuple(sorted(comp)), groups,
                              pg_of_fcomp(inst, pairs, SPLIT_P),
                              pg_of_fcomp(inst, pairs, -SPLIT_P), need))
    return rows
