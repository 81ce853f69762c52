import json

import pytest

from gst12 import Instance, parse_instance, write_instance
from gst12.cli import main


@pytest.fixture
def inst_file(tmp_path, two_pairs_bridge):
    path = tmp_path / "inst.txt"
    path.write_text(write_instance(two_pairs_bridge))
    return path


def test_solve_and_verify(tmp_path, inst_file, capsys):
    sol = tmp_path / "sol.txt"
    trace = tmp_path / "trace.json"
    assert main(["solve", str(inst_file), "--out", str(sol), "--trace", str(trace)]) == 0
    assert sol.read_text().startswith("s 4\n")
    assert json.loads(trace.read_text())["final_cost"] == 4
    assert main(["verify", str(inst_file), str(sol)]) == 0
    assert "OK" in capsys.readouterr().out


def test_verify_failures(tmp_path, inst_file):
    bad = tmp_path / "bad.txt"
    bad.write_text("s 2\nf 0 1\n")
    assert main(["verify", str(inst_file), str(bad)]) == 2
    wrong_cost = tmp_path / "cost.txt"
    wrong_cost.write_text("s 3\nf 0 1\nf 2 3\n")
    assert main(["verify", str(inst_file), str(wrong_cost)]) == 2


def test_rs_requires_single_group(inst_file):
    assert main(["solve", str(inst_file), "--algo", "rs"]) == 1


def test_exact(inst_file, capsys):
    assert main(["exact", str(inst_file)]) == 0
    assert capsys.readouterr().out.startswith("s 4\n")


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("p gst12 3 1 0\ne 0 5\n")
    assert main(["solve", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err
    assert main(["exact", str(tmp_path / "missing.txt")]) == 1
    assert main(["gen", "nodes=2", "pairs=3"]) == 1
    assert main(["gen", "colour=red"]) == 1


def test_gen(tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gen", "nodes=7", "pairs=1", "triples=1", "seed=4", "star_bias=0.5", "--out", str(out)]) == 0
    inst = parse_instance(out.read_text())
    assert inst.n == 7 and len(inst.requirements) == 2
    assert main(["gen", "nodes=6", "group_sizes=2,3", "--out", str(out)]) == 0
    assert [len(g) for g in parse_instance(out.read_text()).requirements] == [2, 3]


def test_ratio(capsys):
    assert main(["ratio", "count=15", "mode=stp", "max_nodes=7", "seed=2"]) == 0
    out = capsys.readouterr()
    assert out.out.splitlines()[0] == "id,n,m,k,alg,opt,skel,ratio_num,ratio_den"
    assert "violations=0" in out.err


def test_audit_stp(tmp_path, star3, capsys):
    path = tmp_path / "star.txt"
    path.write_text(write_instance(star3))
    assert main(["audit", str(path)]) == 0
    text = capsys.readouterr().out
    assert "[hard_facts]" in text and "initial_prom_cost: 4" in text
    assert main(["audit", str(path), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["final"]["cr"] == 0


def test_audit_gst_safety(tmp_path, capsys):
    path = tmp_path / "hub.txt"
    path.write_text(write_instance(Instance.build(5, [(0, 1), (0, 2), (0, 3), (0, 4)], [[1, 2], [3, 4]])))
    assert main(["audit", str(path), "--json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)["safety"]
    assert (row["pg_literal"], row["pg_proof"]) == ("0", "4/3")
