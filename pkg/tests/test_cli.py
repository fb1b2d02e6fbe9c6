import json

import pytest

from bblab.cli import main
from bblab.polytope import Polytope
from bblab.bbtree import BBTree, full_variable_tree, proves_infeasibility


def run_cli(*argv):
    return main(list(argv))


def test_gen_writes_polytope_json(tmp_path):
    out = tmp_path / "p.json"
    assert run_cli("gen", "--family", "cross", "--n", "2", "--out", str(out)) == 0
    obj = json.loads(out.read_text())
    assert obj["dim"] == 2 and obj["box"] is True and len(obj["rows"]) == 4
    assert obj["provenance"]["family"] == "cross"
    assert all(isinstance(c, str) for c in obj["rows"][0]["coeffs"])


def test_gen_oracle_mode_roundtrips(tmp_path):
    out = tmp_path / "p.json"
    assert run_cli("gen", "--family", "cross", "--n", "5", "--oracle",
                   "--out", str(out)) == 0
    P = Polytope.from_json(json.loads(out.read_text()))
    assert P.oracle is not None and P.rows == ()


def test_check_tree_infeasibility_and_fault_injection(tmp_path):
    p = tmp_path / "p.json"
    t = tmp_path / "t.json"
    cert = tmp_path / "cert.json"
    run_cli("gen", "--family", "cross", "--n", "2", "--out", str(p))
    t.write_text(json.dumps(full_variable_tree(2).to_json()))
    assert run_cli("check-tree", "--polytope", str(p), "--tree", str(t),
                   "--mode", "infeasibility", "--out", str(cert)) == 0
    obj = json.loads(cert.read_text())
    assert obj["verdict"] is True and obj["tree_size"] == 7
    assert all(leaf["status"] == "empty" and leaf["farkas"] for leaf in obj["leaves"])

    # drop one row: the corresponding 0/1 point becomes feasible
    broken = json.loads(p.read_text())
    del broken["rows"][0]
    p2 = tmp_path / "broken.json"
    p2.write_text(json.dumps(broken))
    assert run_cli("check-tree", "--polytope", str(p2), "--tree", str(t),
                   "--mode", "infeasibility", "--out", str(cert)) == 1
    obj = json.loads(cert.read_text())
    assert obj["verdict"] is False
    assert any(leaf["status"] == "nonempty" for leaf in obj["leaves"])


def test_run_and_solves_replay_with_witnesses(tmp_path):
    p = tmp_path / "p.json"
    rep = tmp_path / "rep.json"
    tree = tmp_path / "tree.json"
    cert = tmp_path / "cert.json"
    run_cli("gen", "--family", "packing", "--n", "4", "--k", "2", "--out", str(p))
    assert run_cli("run", "--polytope", str(p), "--objective", "ones",
                   "--out", str(rep), "--tree-out", str(tree)) == 0
    report = json.loads(rep.read_text())
    assert report["status"] == "solved" and report["value"] == "1"
    assert run_cli("check-tree", "--polytope", str(p), "--tree", str(tree),
                   "--mode", "solves", "--objective", "ones",
                   "--report", str(rep), "--out", str(cert)) == 0
    assert json.loads(cert.read_text())["verdict"] is True


def test_check_tree_separates_mode(tmp_path):
    p = tmp_path / "p.json"
    t = tmp_path / "t.json"
    run_cli("gen", "--family", "cross", "--n", "2", "--out", str(p))
    t.write_text(json.dumps(full_variable_tree(2).to_json()))
    assert run_cli("check-tree", "--polytope", str(p), "--tree", str(t),
                   "--mode", "separates", "--point", "1/2,1/2",
                   "--out", str(tmp_path / "c.json")) == 0
    t.write_text(json.dumps(BBTree().to_json()))
    assert run_cli("check-tree", "--polytope", str(p), "--tree", str(t),
                   "--mode", "separates", "--point", "1/2,1/2",
                   "--out", str(tmp_path / "c.json")) == 1


def test_min_tree_verb_reports_caveat(tmp_path):
    p = tmp_path / "p.json"
    out = tmp_path / "m.json"
    run_cli("gen", "--family", "cross", "--n", "1", "--out", str(p))
    assert run_cli("min-tree", "--polytope", str(p), "--M", "2",
                   "--max-leaves", "4", "--out", str(out)) == 0
    obj = json.loads(out.read_text())
    assert obj["result"] == "exact" and obj["leaves"] == 2
    assert "bounded-coefficient" in obj["caveat"]


def test_experiment_csv_is_deterministic_and_trees_replay(tmp_path):
    config = {
        "family": "cross",
        "n": [2, 3, 4],
        "oracle": True,
        "strategies": [{"kind": "most-fractional"}],
        "seeds": [0],
        "budget": {"max_nodes": 2000, "max_leaves": 2000},
        "trees_dir": str(tmp_path / "trees"),
    }
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(config))
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert run_cli("experiment", "--config", str(cfg), "--out", str(out1)) == 0
    assert run_cli("experiment", "--config", str(cfg), "--out", str(out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().strip().splitlines()
    assert lines[0] == "family,n,k,strategy,seed,nodes,leaves,status"
    nodes = {row.split(",")[1]: int(row.split(",")[5]) for row in lines[1:]}
    assert nodes == {"2": 7, "3": 15, "4": 31}
    assert all(row.endswith("proved-infeasible") for row in lines[1:])

    from bblab.families import CrossSpec, gen_cross_polytope

    for n in (2, 3, 4):
        tree_file = tmp_path / "trees" / f"cross_n{n}_k0_most-fractional_s0.tree.json"
        tree = BBTree.from_json(json.loads(tree_file.read_text()))
        assert proves_infeasibility(tree, gen_cross_polytope(CrossSpec(n, "oracle"))).proved


def test_experiment_growth_matches_formula_through_n6(tmp_path):
    config = {
        "family": "cross",
        "n": [5, 6],
        "oracle": True,
        "strategies": [{"kind": "most-fractional"}],
        "budget": {"max_nodes": 5000, "max_leaves": 5000},
    }
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(config))
    out = tmp_path / "growth.csv"
    assert run_cli("experiment", "--config", str(cfg), "--out", str(out)) == 0
    rows = out.read_text().strip().splitlines()[1:]
    nodes = {r.split(",")[1]: int(r.split(",")[5]) for r in rows}
    assert nodes == {"5": 2 ** 6 - 1, "6": 2 ** 7 - 1}


def test_experiment_random_general_rows_are_reproducible(tmp_path):
    config = {
        "family": "cross",
        "n": [2, 3],
        "strategies": [{"kind": "random-general", "M": 2, "seed": 7}],
        "budget": {"max_nodes": 3000, "max_leaves": 3000},
    }
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(config))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("experiment", "--config", str(cfg), "--out", str(a)) == 0
    assert run_cli("experiment", "--config", str(cfg), "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
    for row in a.read_text().strip().splitlines()[1:]:
        assert row.endswith("proved-infeasible")


def test_experiment_solved_rows_replay_through_check_tree(tmp_path):
    config = {
        "family": "tsp",
        "n": [6],
        "strategies": [{"kind": "most-fractional"}],
        "seeds": [3],
        "objective": "random",
        "budget": {"max_nodes": 4000, "max_leaves": 4000},
        "trees_dir": str(tmp_path / "trees"),
    }
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(config))
    out = tmp_path / "tsp.csv"
    assert run_cli("experiment", "--config", str(cfg), "--out", str(out)) == 0
    row = out.read_text().strip().splitlines()[1]
    assert row.endswith("solved")
    p = tmp_path / "p.json"
    run_cli("gen", "--family", "tsp", "--n", "6", "--out", str(p))
    stem = tmp_path / "trees" / "tsp_n6_k0_most-fractional_s3"
    assert run_cli(
        "check-tree", "--polytope", str(p),
        "--tree", str(stem) + ".tree.json",
        "--mode", "solves", "--objective", "random", "--seed", "3",
        "--report", str(stem) + ".report.json",
        "--out", str(tmp_path / "cert.json"),
    ) == 0
    assert json.loads((tmp_path / "cert.json").read_text())["verdict"] is True


def test_experiment_config_validation(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "cross", "n": [2], "strategies": []}))
    assert run_cli("experiment", "--config", str(cfg),
                   "--out", str(tmp_path / "x.csv")) == 2
    cfg.write_text(json.dumps({
        "family": "perturbed", "n": [3], "seeds": [],
        "strategies": [{"kind": "most-fractional"}],
    }))
    assert run_cli("experiment", "--config", str(cfg),
                   "--out", str(tmp_path / "x.csv")) == 2


def test_usage_errors_exit_2(tmp_path):
    assert run_cli("gen", "--family", "packing", "--n", "4",
                   "--out", str(tmp_path / "x.json")) == 2  # missing k
    with pytest.raises(SystemExit) as err:
        run_cli("gen", "--family", "nope", "--n", "2")
    assert err.value.code == 2
