import json

import pytest

from grapheff.cli import main, parse_r_list
from grapheff.dataio import mutag_published_records, write_results


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def tree_bytes(root):
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen")
    assert main(["generate", "--kind", "syn-cc", "--r-list", "0.1,0.9", "--n", "600",
                 "--seed", "3", "--jobs", "1", "--out", str(out), "--json"]) == 0
    return out


def test_parse_r_list():
    assert parse_r_list("0.1:0.9:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    assert parse_r_list("0.5, 0.7") == [0.5, 0.7]


def test_generate_writes_datasets(generated):
    assert sorted(p.name for p in generated.iterdir()) == ["syn-cc-r0.10", "syn-cc-r0.90"]
    man = json.loads((generated / "syn-cc-r0.90" / "syn-cc-r0.90_manifest.json").read_text())
    assert man["source"] == "synthetic" and man["graph_count"] == 600
    assert man["generation_spec"]["kind"] == "syn-cc"
    assert man["generation_spec"]["seed"] == 3


def test_generate_is_byte_identical(generated, tmp_path, capsys):
    code, out, err = run(capsys, "generate", "--kind", "syn-cc", "--r-list", "0.1,0.9",
                         "--n", 600, "--seed", 3, "--jobs", 2, "--out", tmp_path)
    assert code == 0 and "seed: 3" in err
    assert tree_bytes(tmp_path) == tree_bytes(generated)
    rows = json.loads(out)["datasets"]
    assert rows[1]["realized_r"] > rows[0]["realized_r"]


@pytest.mark.parametrize("rlist", ["1.5", "0.1:x", "0.2:0.1:-1"])
def test_generate_bad_r_list(tmp_path, capsys, rlist):
    code, _, err = run(capsys, "generate", "--kind", "syn-cc", "--r-list", rlist,
                       "--n", 50, "--out", tmp_path)
    assert code == 2 and "error" in err


def test_generate_output_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GRAPHEFF_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "generate", "--kind", "syn-degree", "--r-list", "0.5",
                     "--n", 40, "--jobs", 1)
    assert code == 0 and (tmp_path / "syn-degree-r0.50").is_dir()
    monkeypatch.delenv("GRAPHEFF_OUTPUT_DIR")
    code, _, _ = run(capsys, "generate", "--kind", "syn-degree", "--r-list", "0.5", "--n", 40)
    assert code == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["generate", "--kind", "syn-diameter"])
    assert info.value.code == 2


def test_corr_mutag(mutag_dir, capsys):
    code, out, err = run(capsys, "corr", mutag_dir, "--json")
    assert code == 0 and "seed: 0" in err
    doc = json.loads(out)
    assert doc["graph_count"] == 188 and len(doc["correlations"]) == 8
    # no triangles or 4-cycles in MUTAG: those properties are constant
    assert doc["undefined"] == ["avg_cc", "cyc3", "cyc4"]
    assert doc["correlations"]["cyc6"] > 0.4


def test_corr_table_and_shuffle(generated, capsys):
    code, out, _ = run(capsys, "corr", generated / "syn-cc-r0.90", "--table")
    assert code == 0 and len(out.strip().splitlines()) == 11
    code, out, _ = run(capsys, "corr", generated / "syn-cc-r0.90", "--shuffle-labels", "--json")
    corr = json.loads(out)["correlations"]
    assert all(abs(v) <= 0.1 for v in corr.values() if v is not None)


def test_corr_missing_dataset(tmp_path, capsys):
    code, _, err = run(capsys, "corr", tmp_path / "none")
    assert code == 3 and "data error" in err


def test_effectiveness_mutag(tmp_path, capsys):
    p = tmp_path / "t2.json"
    write_results(mutag_published_records(), p)
    code, out, _ = run(capsys, "effectiveness", "--results", p, "--classes", 2, "--json")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["total_effectiveness"] == pytest.approx(0.0410, abs=5e-4)
    code, out, _ = run(capsys, "effectiveness", "--results", p, "--classes", 2, "--table")
    assert "MUTAG" in out and "0.0410" in out


def test_effectiveness_percent_and_auc(tmp_path, capsys):
    p = tmp_path / "r.json"
    recs = [{"dataset": "HIV", "method": m, "info_type": "S", "metric": metric,
             "mean": v, "std": 1.0}
            for m, metric, v in [("baseline", "accuracy", 96.0), ("gin", "accuracy", 97.0),
                                 ("baseline", "auc_roc", 60.0), ("gin", "auc_roc", 75.0)]]
    p.write_text(json.dumps(recs))
    _, acc, _ = run(capsys, "effectiveness", "--results", p, "--classes", 2, "--percent",
                    "--json")
    _, auc, _ = run(capsys, "effectiveness", "--results", p, "--classes", 2, "--percent",
                    "--metric", "auc", "--json")
    e_acc = json.loads(acc)["reports"][0]["total_effectiveness"]
    e_auc = json.loads(auc)["reports"][0]["total_effectiveness"]
    assert e_auc > 10 * e_acc


def test_effectiveness_empty_and_bad(tmp_path, capsys):
    p = tmp_path / "empty.json"
    p.write_text("[]")
    assert run(capsys, "effectiveness", "--results", p, "--classes", 2)[0] == 2
    p.write_text(json.dumps([{"dataset": "D", "method": "m", "info_type": "S",
                              "metric": "accuracy", "mean": 1.2, "std": 0}]))
    code, _, err = run(capsys, "effectiveness", "--results", p, "--classes", 2)
    assert code == 3 and "mean" in err


def test_effectiveness_plot_data(tmp_path, capsys):
    p = tmp_path / "t2.json"
    write_results(mutag_published_records(), p)
    _, out, _ = run(capsys, "effectiveness", "--results", p, "--classes", 2, "--plot-data")
    head, row = out.strip().splitlines()
    assert head.split() == ["dataset", "E_A", "E_S", "E"]
    assert row.split()[0] == "MUTAG"


def test_evaluate(generated, tmp_path, capsys):
    res = tmp_path / "res.json"
    code, out, _ = run(capsys, "evaluate", generated / "syn-cc-r0.90", "--models",
                       "degree,properties", "--k", 5, "--out", res, "--json", "--jobs", 1)
    assert code == 0
    doc = json.loads(out)
    rep = doc["datasets"][0]["report"]
    assert rep["per_type"]["S"]["delta"] > 0
    code, out, _ = run(capsys, "effectiveness", "--results", res, "--classes", 2, "--json")
    assert json.loads(out)["reports"][0]["total_effectiveness"] == rep["total_effectiveness"]


def test_evaluate_roster_file(generated, tmp_path, capsys):
    roster = tmp_path / "roster.json"
    roster.write_text(json.dumps({"models": ["degree", {"model": "wl", "grid": {"h": [1]}}]}))
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"wl": {"h": [1], "alpha": [0.1]}}))
    code, out, _ = run(capsys, "evaluate", generated / "syn-cc-r0.10", "--roster", roster,
                       "--grid", grid, "--k", 3, "--plot-data", "--jobs", 1)
    assert code == 0
    head, row = out.strip().splitlines()
    assert head.split() == ["r", "baseline", "graph", "gap"] and row.split()[0] == "0.1"


def test_evaluate_unknown_model(generated, capsys):
    code, _, err = run(capsys, "evaluate", generated / "syn-cc-r0.10", "--models", "degree,gin")
    assert code == 2 and "gin" in err


def test_regress(generated, tmp_path, capsys):
    csv, js = tmp_path / "reg.csv", tmp_path / "reg.json"
    code, out, _ = run(capsys, "regress", "--datasets", generated, "--parts", 10, "--k", 3,
                       "--repeats", 2, "--permutations", 200, "--out-csv", csv,
                       "--out-json", js, "--json", "--jobs", 1)
    assert code == 0
    summary = json.loads(out)
    assert summary["regressor"] == "Ridge" and summary["samples"] == 20
    assert {"pearson_mean", "pearson_std", "p_value_max"} <= set(summary)
    assert json.loads(js.read_text()) == summary
    assert len(csv.read_text().splitlines()) == 21


def test_regress_too_small(tmp_path, capsys):
    run(capsys, "generate", "--kind", "syn-cc", "--r-list", "0.2,0.4", "--n", 60,
        "--out", tmp_path, "--jobs", 1)
    code, _, err = run(capsys, "regress", "--datasets", tmp_path, "--jobs", 1)
    assert code == 2 and "subsets" in err
