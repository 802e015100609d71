import json

import numpy as np
import pytest

from relwl.cli import main


def run_cli(*argv):
    return main(list(argv))


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture
def prop3_files(tmp_path):
    edges = tmp_path / "g.tsv"
    labels = tmp_path / "g.labels.tsv"
    assert run_cli("gen", "--family", "prop3", "--out-a", str(edges),
                   "--labels-a", str(labels)) == 0
    return edges, labels


def test_gen_and_run_round(prop3_files, tmp_path):
    edges, labels = prop3_files
    out = tmp_path / "coloring.json"
    assert run_cli("wl", "run", "--graph", str(edges), "--labels", str(labels),
                   "--variant", "1rwl", "--out", str(out)) == 0
    data = read_json(out)
    assert data["class_count"] == 4
    assert data["iterations"] == 2
    assert sorted(data["colors"]) == [0, 1, 2, 3]


def test_wl_run_weak_variant(prop3_files, tmp_path):
    edges, labels = prop3_files
    out = tmp_path / "weak.json"
    assert run_cli("wl", "run", "--graph", str(edges), "--labels", str(labels),
                   "--variant", "weak", "--out", str(out)) == 0
    data = read_json(out)
    assert data["class_count"] == 3
    # colors are indexed by token first-occurrence; find the two label-0 vertices
    from relwl import load_graph

    result = load_graph(edges, labels)
    v = result.vertex_tokens.index("0")
    w = result.vertex_tokens.index("1")
    assert data["colors"][v] == data["colors"][w]


def test_compare_cycle_pair(tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert run_cli("gen", "--family", "cycle-pair", "-r", "2",
                   "--out-a", str(a), "--out-b", str(b)) == 0
    out = tmp_path / "verdict.json"
    assert run_cli("wl", "compare", "--graph-a", str(a), "--graph-b", str(b),
                   "--variant", "1rwl", "--out", str(out)) == 0
    data = read_json(out)
    assert data["distinguished"] is False
    assert data["at_iteration"] is None
    assert run_cli("wl", "compare", "--graph-a", str(a), "--graph-b", str(b),
                   "--variant", "krlwl", "-k", "2", "--out", str(out)) == 0
    assert read_json(out)["distinguished"] is True


def test_compare_subset_pair_order_matters(tmp_path):
    a, b = tmp_path / "g2.tsv", tmp_path / "h2.tsv"
    assert run_cli("gen", "--family", "gk-hk", "-k", "2",
                   "--out-a", str(a), "--out-b", str(b)) == 0
    out = tmp_path / "v.json"
    assert run_cli("wl", "compare", "--graph-a", str(a), "--graph-b", str(b),
                   "--variant", "delta-klwl", "-k", "2", "--out", str(out)) == 0
    assert read_json(out)["distinguished"] is True
    assert run_cli("wl", "compare", "--graph-a", str(a), "--graph-b", str(b),
                   "--variant", "oblivious-kwl", "-k", "2", "--out", str(out)) == 0
    assert read_json(out)["distinguished"] is False


def test_gnn_forward_deterministic_across_runs(prop3_files, tmp_path):
    edges, labels = prop3_files
    outs = []
    for name in ("f1.json", "f2.json"):
        out = tmp_path / name
        assert run_cli("gnn", "forward", "--graph", str(edges), "--labels", str(labels),
                       "--arch", "rgcn", "--layers", "2", "--seed", "11",
                       "--out", str(out)) == 0
        outs.append(read_json(out))
    assert outs[0] == outs[1]
    assert outs[0]["rows"] == 4


def test_gnn_forward_explicit_params(prop3_files, tmp_path):
    edges, labels = prop3_files
    config = tmp_path / "params.json"
    w0 = np.zeros((3, 2)).tolist()
    config.write_text(json.dumps({
        "arch": "compgcn",
        "layers": [{"w0": w0, "w1": np.zeros((3, 2)).tolist(),
                    "z": [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
                    "composition": "mult"}],
    }))
    out = tmp_path / "f.json"
    assert run_cli("gnn", "forward", "--graph", str(edges), "--labels", str(labels),
                   "--arch", "compgcn", "--config", str(config), "--layers", "1",
                   "--out", str(out)) == 0
    data = read_json(out)
    assert not any(any(row) for row in data["features"])


def test_gnn_forward_json_graph_input(tmp_path):
    from relwl import dump_graph_json, gen_prop3

    path = tmp_path / "g.json"
    dump_graph_json(gen_prop3(), path)
    out = tmp_path / "f.json"
    assert run_cli("gnn", "forward", "--graph", str(path), "--arch", "krn",
                   "--layers", "1", "--seed", "2", "--out", str(out)) == 0
    assert read_json(out)["rows"] == 16


def test_verify_suite_and_exit_codes(tmp_path):
    out = tmp_path / "verdict.json"
    assert run_cli("verify", "--suite", "prop3", "--out", str(out)) == 0
    assert read_json(out)["pass"] is True
    # cap refusal surfaces as exit 2
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"prop9": {"tuple_cap": 100}}))
    assert run_cli("verify", "--suite", "prop9", "--config", str(config),
                   "--out", str(out)) == 2


def test_verify_consistency_mode(prop3_files, tmp_path):
    edges, labels = prop3_files
    out = tmp_path / "report.json"
    assert run_cli("verify", "consistency", "--graph", str(edges), "--labels",
                   str(labels), "--pair", "1rwl:compgcn-mult", "--layers", "2",
                   "--seeds", "3", "--out", str(out)) == 0
    data = read_json(out)
    assert data["pass"] is True
    assert data["violations"] == []
    assert all(rates[-1] == 1.0 for rates in data["witness_rates"].values())


def test_cli_errors_exit_two(tmp_path):
    missing = tmp_path / "missing.tsv"
    missing.write_text("a\tr\ta\n")
    assert run_cli("wl", "run", "--graph", str(missing), "--variant", "1rwl") == 2
    assert run_cli("verify") == 2
