import json

import networkx as nx
import pytest

from conftest import to_nx
from twalpha.cli import run_command
from twalpha.graph import Graph, complete_bipartite


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = run_command([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text(encoding="utf-8")) if out.exists() else None)


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, argv in {"k33": ["--kind", "complement_kKw", "--k", "2", "--w", "3"],
                       "p5": ["--kind", "path", "--n", "5"],
                       "k44": ["--kind", "complete_bipartite", "--s", "4", "--t", "4"],
                       "k55": ["--kind", "complete_bipartite", "--s", "5", "--t", "5"],
                       "star": ["--kind", "star", "--leaves", "24"]}.items():
        p = tmp_path / f"{name}.json"
        assert run_command(["gen", *argv, "--out", str(p)]) == 0
        paths[name] = str(p)
    return paths


def test_gen_complement_is_k33(files):
    g = Graph.from_dict(json.loads(open(files["k33"], encoding="utf-8").read()))
    assert nx.is_isomorphic(to_nx(g), to_nx(complete_bipartite(3, 3)))


def test_usage_errors_exit_2(tmp_path, files):
    assert run_command(["nonsense"]) == 2
    assert run_command(["gen", "--kind", "gnp", "--n", "5"]) == 2
    assert run_command(["tdecomp", "verify", "--graph", files["p5"], "--td", str(tmp_path / "missing.json")]) == 2
    assert run_command(["absep", "pack", "--graph", files["k44"], "--A", "0", "--B", "1", "--ell", "1"]) == 2


@pytest.mark.parametrize("argv", [["containers", "verify"], ["containers", "build"], ["absep", "round"],
                                  ["absep", "uvsep", "--u", "0", "--v", "1"], ["balsep", "round"],
                                  ["tdecomp", "verify"], ["lp", "build"]])
def test_missing_options_exit_2(files, argv, capsys):
    assert run_command([*argv, "--graph", files["k33"]]) == 2
    assert "needs --" in capsys.readouterr().err


def test_verification_failure_exits_1(tmp_path, files):
    code, _ = run(tmp_path, "tdecomp", "build", "--graph", files["k33"], "--a-target", "2")
    assert code == 1
    bad = tmp_path / "td.json"
    bad.write_text(json.dumps({"nodes": [0], "edges": [], "bags": {"0": [0, 1, 2]}}), encoding="utf-8")
    code, rep = run(tmp_path, "tdecomp", "verify", "--graph", files["p5"], "--td", str(bad))
    assert code == 1 and rep["pass"] is False


def test_reports_carry_claims_and_provenance(tmp_path, files):
    code, rep = run(tmp_path, "absep", "uvsep", "--graph", files["p5"], "--u", "0", "--v", "4",
                    "--omega", "2", "--k", "2", "--f-target", "10")
    assert code == 0 and rep["result"]["branch"] == "separator"
    assert all({"name", "claimed", "achieved", "pass"} <= set(c) for c in rep["claims"])
    assert rep["provenance"]["seed"] == 0 and "numpy" in rep["provenance"]["versions"]
    assert "timestamp" in rep["metadata"]


def test_reruns_are_identical_apart_from_metadata(tmp_path, files):
    argv = ["balsep", "sample", "--graph", files["k44"], "--I", "0-3", "--seed", "3"]
    first = run(tmp_path, *argv)[1]
    second = run(tmp_path, *argv)[1]
    first.pop("metadata"), second.pop("metadata")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_container_round_trip(tmp_path, files):
    fam = tmp_path / "fam.json"
    assert run_command(["containers", "build", "--graph", files["k33"], "--omega", "3", "--k", "2", "--b", "1"]) == 2
    code, _ = run(tmp_path, "containers", "build", "--graph", files["k33"], "--omega", "3", "--k", "2", "--b", "1",
                  "--trust", "--family-out", str(fam))
    assert code == 0
    code, rep = run(tmp_path, "verify", "--graph", files["k33"], "--containers", str(fam))
    assert code == 0 and rep["pass"]
    code, rep = run(tmp_path, "containers", "lowerbound", "--omega", "3", "--b", "1", "--a", "1", "--k", "2",
                    "--graph", files["k33"])
    assert code == 0 and rep["result"] == {"bruteforce": 9, "formula": 9}


def test_lp_build_and_solve(tmp_path, files):
    model = tmp_path / "m.lp"
    assert run_command(["lp", "build", "--graph", files["k33"], "--I", "0-2", "--out", str(model)]) == 0
    code, rep = run(tmp_path, "lp", "solve", "--model", str(model), "--method", "exact")
    assert code == 0 and rep["result"]["objective"] == "27/170"


def test_corpus_appends_json_lines(tmp_path):
    out = tmp_path / "corpus.jsonl"
    assert run_command(["corpus", "--only", "2", "9", "--out", str(out)]) == 0
    assert run_command(["corpus", "--only", "2", "--out", str(out)]) == 0
    rows = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert [r["criterion"] for r in rows] == [2, 9, 2] and all(r["pass"] for r in rows)
