from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gst12 import (GenParams, Instance, ParseError, RatioConfig, gen_random, parse_instance, parse_solution,
                   run_ratio_experiment, write_instance, write_solution)


def test_parse_minimal():
    inst = parse_instance("p gst12 2 1 1\ne 0 1\nr 0 1\n")
    assert inst == Instance.build(2, [(0, 1)], [[0, 1]])


def test_parse_singleton_requirement_dropped():
    inst = parse_instance("# comment\np gst12 3 0 2\nr 0   # lone terminal\nr 1 2\n")
    assert inst.requirements == (frozenset({1, 2}),)


@pytest.mark.parametrize("text, line", [
    ("p gst12 3 1 0\ne 0 5\n", 2),
    ("p gst12 3 2 0\ne 0 1\ne 1 0\n", 3),
    ("p gst12 3 1 0\ne 1 1\n", 2),
    ("p gst12 3 0 1\nr 0 7\n", 2),
    ("p gst12 3 0 1\nr\n", 2),
    ("p gst12 3 0 0\nx 1 2\n", 2),
    ("e 0 1\n", 1),
    ("p gst12 3 0 0\ne a b\n", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line


@pytest.mark.parametrize("text", ["p gst12 3 2 0\ne 0 1\n", "p gst12 3 0 2\nr 0 1\n", ""])
def test_parse_count_mismatch(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_solution_format():
    assert write_solution([], 0) == "s 0\n"
    text = write_solution({(2, 1), (0, 1)}, 3)
    assert text == "s 3\nf 0 1\nf 1 2\n"
    assert parse_solution(text) == (3, frozenset({(0, 1), (1, 2)}))
    with pytest.raises(ParseError):
        parse_solution("f 0 1\n")


def test_gen_determinism_and_extremes():
    p = GenParams(9, 0.4, pairs=1, triples=2, seed=77, star_bias=0.3)
    assert gen_random(p) == gen_random(p)
    assert gen_random(GenParams(6, 0.0, pairs=2, seed=1)).graph.edges == frozenset()
    full = gen_random(GenParams(5, 1.0, seed=1))
    assert len(full.graph.edges) == 10
    with pytest.raises(ValueError):
        gen_random(GenParams(3, 0.5, pairs=2))
    with pytest.raises(ValueError):
        gen_random(GenParams(3, 1.5))


def test_gen_groups_are_leading_nodes():
    inst = gen_random(GenParams(9, 0.0, pairs=2, triples=1))
    assert inst.requirements == (frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5, 6}))


def test_star_bias_adds_terminal_nonterminal_edges():
    def mixed(bias):
        inst = gen_random(GenParams(10, 0.1, pairs=3, seed=3, star_bias=bias))
        return sum((u < 6) != (v < 6) for u, v in inst.graph.edges)
    assert mixed(0.0) < mixed(0.9)
    assert mixed(1.0) == 6 * 4


@given(st.integers(1, 10), st.floats(0, 1), st.integers(0, 2**63 - 1), st.integers(0, 2), st.integers(0, 2))
def test_round_trip(n, p, seed, pairs, triples):
    if 2 * pairs + 3 * triples > n:
        pairs = triples = 0
    inst = gen_random(GenParams(n, p, pairs, triples, seed))
    assert parse_instance(write_instance(inst)) == inst


def test_ratio_rows(star3, two_pairs_bridge):
    report = run_ratio_experiment(RatioConfig(mode="stp"), [star3])
    (row,) = report.rows
    assert (row.alg, row.opt, row.skel, row.ratio) == (3, 3, 3, Fraction(1))
    report = run_ratio_experiment(RatioConfig(mode="gst"), [two_pairs_bridge])
    (row,) = report.rows
    assert (row.alg, row.opt, row.ratio) == (4, 4, 1)


def test_ratio_empty():
    report = run_ratio_experiment(RatioConfig(count=0))
    assert report.rows == [] and report.violations == 0 and report.ok
    assert report.to_csv() == "id,n,m,k,alg,opt,skel,ratio_num,ratio_den\n"


def test_ratio_skips_oversized():
    big = Instance.build(20, [], [[2 * i, 2 * i + 1] for i in range(9)])
    report = run_ratio_experiment(RatioConfig(mode="gst"), [big])
    assert report.skipped == 1 and report.rows == []


def test_ratio_csv_rows():
    report = run_ratio_experiment(RatioConfig(count=40, max_nodes=8, mode="gst", seed=9))
    lines = report.to_csv().splitlines()
    assert len(lines) == 1 + 40 - report.skipped
    assert report.ok
    assert all(r.alg >= r.opt for r in report.rows)
