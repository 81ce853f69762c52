"""Instance/solution files, random instances and ratio experiments.

Instance format (whitespace separated, ``#`` starts a comment, nodes 0-based)::

    p gst12 <n> <m> <k>
    e <u> <v>            # m lines, distance-1 pairs
    r <t1> <t2> ...      # k lines, requirement groups

Solution format::

    s <cost>
    f <u> <v>            # one line per pair
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ParseError, ResourceLimitError
from .gst import solve_gst
from .instance import Instance, MetricGraph, norm_pair, solution_cost
from .oracle import skeleton_cost, steiner_forest_opt
from .rayward_smith import solve_stp


def _strip(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_instance(text: str) -> Instance:
    header = None
    edges: list = []
    seen_edges: set = set()
    groups: list = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = _strip(line)
        if not tok:
            continue
        tag, rest = tok[0], tok[1:]
        if header is None:
            if tag != "p" or len(rest) != 4 or rest[0] != "gst12":
                raise ParseError("expected header 'p gst12 <n> <m> <k>'", lineno)
            header = _ints(rest[1:], lineno)
            if min(header) < 0:
                raise ParseError("negative count in header", lineno)
            continue
        n = header[0]
        if tag == "e":
            if len(rest) != 2:
                raise ParseError("edge line needs two nodes", lineno)
            u, v = _ints(rest, lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge ({u}, {v}) out of range for n={n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at node {u}", lineno)
            e = norm_pair(u, v)
            if e in seen_edges:
                raise ParseError(f"duplicate edge {e}", lineno)
            seen_edges.add(e)
            edges.append(e)
        elif tag == "r":
            if not rest:
                raise ParseError("empty requirement", lineno)
            ts = _ints(rest, lineno)
            bad = [t for t in ts if not 0 <= t < n]
            if bad:
                raise ParseError(f"terminal {bad[0]} out of range for n={n}", lineno)
            groups.append(ts)
        elif tag == "p":
            raise ParseError("second header line", lineno)
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if header is None:
        raise ParseError("missing header")
    n, m, k = header
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    if len(groups) != k:
        raise ParseError(f"header announces {k} requirements, found {len(groups)}")
    return Instance(MetricGraph(n, frozenset(edges)), tuple(groups))


def write_instance(inst: Instance) -> str:
    lines = [f"p gst12 {inst.n} {len(inst.graph.edges)} {len(inst.requirements)}"]
    lines += [f"e {u} {v}" for u, v in sorted(inst.graph.edges)]
    lines += ["r " + " ".join(map(str, sorted(g))) for g in inst.requirements]
    return "\n".join(lines) + "\n"


def write_solution(pairs, cost: int) -> str:
    lines = [f"s {cost}"] + [f"f {u} {v}" for u, v in sorted(norm_pair(*p) for p in pairs)]
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[int, frozenset]:
    cost = None
    pairs = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = _strip(line)
        if not tok:
            continue
        if tok[0] == "s" and len(tok) == 2 and cost is None:
            cost = _ints(tok[1:], lineno)[0]
        elif tok[0] == "f" and len(tok) == 3:
            u, v = _ints(tok[1:], lineno)
            try:
                pairs.add(norm_pair(u, v))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        else:
            raise ParseError(f"unexpected line {line.strip()!r}", lineno)
    if cost is None:
        raise ParseError("missing 's <cost>' line")
    return cost, frozenset(pairs)


@dataclass(frozen=True)
class GenParams:
    """Parameters of :func:`gen_random`.

    Terminals are nodes ``0..k-1``: first the pair groups, then the triples,
    then one group per entry of ``group_sizes``.  A pair with exactly one
    terminal endpoint is an edge with probability
    ``edge_prob + star_bias * (1 - edge_prob)``; a terminal-terminal pair uses
    ``terminal_edge_prob`` when given.
    """

    nodes: int
    edge_prob: float = 0.3
    pairs: int = 0
    triples: int = 0
    seed: int = 0
    star_bias: float = 0.0
    group_sizes: tuple = ()
    terminal_edge_prob: float | None = None

    @property
    def sizes(self) -> list[int]:
        return [2] * self.pairs + [3] * self.triples + list(self.group_sizes)


def gen_random(params: GenParams) -> Instance:
    sizes = params.sizes
    k = sum(sizes)
    if k > params.nodes:
        raise ValueError(f"{k} terminals do not fit in {params.nodes} nodes")
    for p in (params.edge_prob, params.star_bias, params.terminal_edge_prob):
        if p is not None and not 0 <= p <= 1:
            raise ValueError(f"probability {p} outside [0, 1]")
    rng = np.random.default_rng(params.seed)
    n = params.nodes
    base = float(params.edge_prob)
    mixed = base + float(params.star_bias) * (1 - base)
    tt = base if params.terminal_edge_prob is None else float(params.terminal_edge_prob)
    draws = rng.random(n * (n - 1) // 2)
    edges = []
    i = 0
    for u in range(n):
        for v in range(u + 1, n):
            both = (u < k) + (v < k)
            prob = tt if both == 2 else (mixed if both == 1 else base)
            if draws[i] < prob:
                edges.append((u, v))
            i += 1
    groups, start = [], 0
    for s in sizes:
        groups.append(range(start, start + s))
        start += s
    return Instance.build(n, edges, groups)


def random_params(rng: np.random.Generator, max_nodes: int = 10, mode: str = "gst",
                  max_groups: int = 4) -> GenParams:
    """Draw generator parameters for one experiment instance."""
    seed = int(rng.integers(2**63))
    if mode == "stp":
        n = int(rng.integers(2, max_nodes + 1))
        k = int(rng.integers(2, n + 1))
        return GenParams(n, float(rng.uniform(0.05, 0.5)), seed=seed,
                         star_bias=float(rng.uniform(0, 0.7)), group_sizes=(k,))
    while True:
        n = int(rng.integers(2, max_nodes + 1))
        groups = int(rng.integers(1, max_groups + 1))
        triples = int(rng.integers(0, groups + 1))
        pairs = groups - triples
        if 2 * pairs + 3 * triples <= n:
            break
    return GenParams(n, float(rng.uniform(0.05, 0.5)), pairs, triples, seed,
                     star_bias=float(rng.uniform(0, 0.7)))


@dataclass
class RatioRow:
    id: int
    n: int
    m: int
    k: int
    alg: int
    opt: int
    skel: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.alg, self.opt) if self.opt else Fraction(1)


@dataclass
class RatioReport:
    mode: str
    rows: list = field(default_factory=list)
    skipped: int = 0

    def violates(self, row: RatioRow) -> bool:
        if row.alg < row.opt:
            return True
        if self.mode == "stp":
            return 3 * row.alg > 3 * row.opt + row.skel
        return 2 * row.alg > 3 * row.opt

    @property
    def violations(self) -> int:
        return sum(self.violates(r) for r in self.rows)

    @property
    def max_ratio(self) -> Fraction:
        return max((r.ratio for r in self.rows), default=Fraction(1))

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def summary(self) -> dict:
        return {"mode": self.mode, "count": len(self.rows), "skipped": self.skipped,
                "violations": self.violations, "max_ratio": str(self.max_ratio)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "n", "m", "k", "alg", "opt", "skel", "ratio_num", "ratio_den"])
        for r in sorted(self.rows, key=lambda r: r.id):
            q = r.ratio
            w.writerow([r.id, r.n, r.m, r.k, r.alg, r.opt, r.skel, q.numerator, q.denominator])
        return buf.getvalue()


@dataclass(frozen=True)
class RatioConfig:
    count: int = 100
    max_nodes: int = 10
    mode: str = "gst"
    seed: int = 0
    max_groups: int = 4
    stars: str = "active"


def solve(inst: Instance, mode: str, stars: str = "active"):
    if mode == "stp":
        return solve_stp(inst)
    if mode == "gst":
        return solve_gst(inst, stars)
    raise ValueError(f"unknown mode {mode!r}")


def ratio_row(i: int, inst: Instance, mode: str, stars: str = "active") -> RatioRow:
    f, _ = solve(inst, mode, stars)
    opt = steiner_forest_opt(inst)
    return RatioRow(i, inst.n, len(inst.graph.edges), len(inst.requirements),
                    solution_cost(inst.graph, f), opt.cost, skeleton_cost(inst.graph, opt.pairs))


def run_ratio_experiment(config: RatioConfig, instances=None) -> RatioReport:
    """Solve random (or given) instances and compare against the exact oracle."""
    if config.mode not in ("stp", "gst"):
        raise ValueError(f"unknown mode {config.mode!r}")
    report = RatioReport(config.mode)
    if instances is None:
        rng = np.random.default_rng(config.seed)
        instances = (gen_random(random_params(rng, config.max_nodes, config.mode, config.max_groups))
                     for _ in range(config.count))
    for i, inst in enumerate(instances):
        try:
            report.rows.append(ratio_row(i, inst, config.mode, config.stars))
        except ResourceLimitError:
            report.skipped += 1
    return report
