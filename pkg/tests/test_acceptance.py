"""Acceptance suite: each test prints one PASS/FAIL line (also collected in
the terminal summary) and asserts at the stated tolerance."""
import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from gst12 import (GenParams, Instance, ResidualState, Trace, audit_stp_run, brute_force_opt,
                   check_safety_lemmas, gen_random, ge_preprocess, parse_instance, propify,
                   replay, solution_cost, solve_gst, solve_stp, steiner_forest_opt,
                   write_instance)
from gst12.gst import annihilate_unsafe
from gst12.harness import random_params
from gst12.instance import is_valid_solution
from gst12.oracle import components, skeleton_cost

pytestmark = pytest.mark.acceptance

SUITE = 10_000


def _random_family(rng, n):
    k = int(rng.integers(1, 4))
    fam = []
    for _ in range(k):
        size = int(rng.integers(1, n + 1))
        fam.append(rng.choice(n, size=size, replace=False).tolist())
    return fam


def _invariant_instances(seed=606, count=SUITE):
    rng = np.random.default_rng(seed)
    return [gen_random(random_params(rng, max_nodes=8, mode="gst", max_groups=3)) for _ in range(count)]


@pytest.fixture(scope="module")
def invariant_instances():
    return _invariant_instances()


def test_c1_oracle_soundness(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    mismatches, families = [], 0
    for n in range(2, 6):
        pairs = list(itertools.combinations(range(n), 2))
        for bits in range(1 << len(pairs)):
            edges = [p for i, p in enumerate(pairs) if bits >> i & 1]
            inst = Instance.build(n, edges, _random_family(rng, n))
            families += 1
            if steiner_forest_opt(inst).cost != brute_force_opt(inst):
                mismatches.append(inst)
    for _ in range(500):
        sizes = tuple(int(s) for s in rng.integers(2, 4, size=int(rng.integers(1, 3))))
        inst = gen_random(GenParams(6, float(rng.uniform(0.1, 0.6)), seed=int(rng.integers(2**63)),
                                    star_bias=float(rng.uniform(0, 0.5)), group_sizes=sizes))
        families += 1
        if steiner_forest_opt(inst).cost != brute_force_opt(inst):
            mismatches.append(inst)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and families >= 1500 and elapsed < 120
    verdict("C1 oracle soundness: DW forest = brute force", ok,
            f"{families} instances, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches
    assert elapsed < 120


def test_c2_gst_bound(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(202)
    bad, worst = [], Fraction(1)
    for _ in range(5000):
        inst = gen_random(random_params(rng, max_nodes=10, mode="gst", max_groups=4))
        f, _ = solve_gst(inst)
        alg = solution_cost(inst.graph, f)
        opt = steiner_forest_opt(inst).cost
        if not is_valid_solution(inst, f) or 2 * alg > 3 * opt or alg < opt:
            bad.append(inst)
        if opt:
            worst = max(worst, Fraction(alg, opt))
    elapsed = time.perf_counter() - t0
    verdict("C2 GST bound 2*ALG <= 3*OPT", not bad and elapsed < 300,
            f"5000 instances, {len(bad)} violations, max ratio {worst}, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 300


def test_c3_stp_bound(verdict):
    rng = np.random.default_rng(303)
    bad, worst = [], Fraction(1)
    for _ in range(5000):
        inst = gen_random(random_params(rng, max_nodes=10, mode="stp"))
        f, _ = solve_stp(inst)
        alg = solution_cost(inst.graph, f)
        opt = steiner_forest_opt(inst)
        if not is_valid_solution(inst, f) or 3 * alg > 3 * opt.cost + skeleton_cost(inst.graph, opt.pairs):
            bad.append(inst)
        if opt.cost:
            worst = max(worst, Fraction(alg, opt.cost))
    verdict("C3 STP bound 3*ALG <= 3*OPT + skel", not bad,
            f"5000 instances, {len(bad)} violations, max ratio {worst}")
    assert not bad


def test_c4_ledger_hard_facts(verdict):
    rng = np.random.default_rng(404)
    failures, bridgeless_bad, rates = 0, 0, []
    for _ in range(1000):
        inst = gen_random(random_params(rng, max_nodes=10, mode="stp"))
        _, trace = solve_stp(inst)
        report = audit_stp_run(inst, steiner_forest_opt(inst), trace)
        failures += not report.ok
        bridgeless_bad += not report.bridgeless_ok
        rates.append(report.monotone_rate)
    rate = float(np.mean(rates))
    verdict("C4 ledger hard facts and bridgeless normalization", failures == 0 and bridgeless_bad == 0,
            f"1000 audits, {failures} hard-fact failures, {bridgeless_bad} bridgeless failures, "
            f"mean per-step monotonicity {rate:.4f}")
    assert failures == 0
    assert bridgeless_bad == 0


def _fixpoint_instances(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        base = random_params(rng, max_nodes=9, mode="gst", max_groups=4)
        params = GenParams(base.nodes, base.edge_prob, base.pairs, base.triples, base.seed,
                           star_bias=base.star_bias, terminal_edge_prob=0.0)
        inst = gen_random(params)
        probe = Trace()
        ge_preprocess(ResidualState(inst), probe)
        if not probe.moves and inst.requirements:
            out.append(inst)
    return out


def test_c5_safety_lemmas(verdict):
    crashes, rows = 0, []
    for inst in _fixpoint_instances(500, 505):
        try:
            rows.extend(check_safety_lemmas(inst, steiner_forest_opt(inst)))
        except Exception:
            crashes += 1
    pair_rows = [r for r in rows if all(len(g) == 2 for g in r.groups)]
    literal_bad = [r for r in pair_rows if not r.holds_literal]
    proof_bad = [r for r in pair_rows if not r.holds_proof]
    verdict("C5 safety lemmas: pair-group components p_g >= 1 (literal -2/3)",
            crashes == 0 and not literal_bad,
            f"{len(rows)} components, {len(pair_rows)} pair-only, {crashes} crashes, "
            f"{len(literal_bad)} literal violations, {len(proof_bad)} under +2/3")
    assert crashes == 0
    assert not literal_bad, f"first violation: {literal_bad[0].to_dict()}"


def test_c6_propify_idempotent(verdict):
    rng = np.random.default_rng(601)
    bad = 0
    for _ in range(SUITE):
        fam = _random_family(rng, int(rng.integers(1, 9)))
        once = propify(fam)
        bad += propify(once) != once
    verdict("C6a propify idempotence", bad == 0, f"{SUITE} cases")
    assert bad == 0


def test_c6_forest_invariant(verdict, invariant_instances):
    bad = 0
    for inst in invariant_instances:
        f, _ = solve_gst(inst)
        nodes = {x for p in f for x in p}
        bad += len(f) != len(nodes) - len(components(f, inst.n)) or not is_valid_solution(inst, f)
    verdict("C6b residual state keeps f a forest", bad == 0, f"{len(invariant_instances)} cases")
    assert bad == 0


def test_c6_replay_determinism(verdict, invariant_instances):
    bad = 0
    for inst in invariant_instances:
        f1, t1 = solve_gst(inst)
        f2, t2 = solve_gst(inst)
        bad += t1 != t2 or f1 != f2 or replay(inst, t1) != f1
    verdict("C6c trace replay determinism", bad == 0, f"{len(invariant_instances)} cases")
    assert bad == 0


def test_c6_ge_fixpoint(verdict, invariant_instances):
    bad = 0
    for inst in invariant_instances:
        state, _ = ge_preprocess(ResidualState(inst))
        active = set().union(*state.induced_requirements())
        for u, v in inst.graph.edges:
            a, b = state.find(u), state.find(v)
            if a != b and a in active and b in active:
                bad += 1
                break
    verdict("C6d GE fixpoint has no active terminal-terminal edge", bad == 0,
            f"{len(invariant_instances)} cases")
    assert bad == 0


def test_c6_annihilation_identity(verdict, invariant_instances):
    bad, unsafe_sets = 0, 0
    for inst in invariant_instances:
        state, tagged = ge_preprocess(ResidualState(inst))
        expected = sum(len(r.origins) + 1 for r in tagged if not r.safe)
        unsafe_sets += sum(not r.safe for r in tagged)
        before = state.cost()
        annihilate_unsafe(state, tagged)
        bad += state.cost() - before != expected
    verdict("C6e annihilation contributes p+1 per unsafe p-pair set", bad == 0,
            f"{len(invariant_instances)} cases, {unsafe_sets} unsafe sets")
    assert bad == 0


def test_c6_round_trip(verdict, invariant_instances):
    bad = sum(parse_instance(write_instance(inst)) != inst for inst in invariant_instances)
    verdict("C6f parse/write round trip", bad == 0, f"{len(invariant_instances)} cases")
    assert bad == 0
