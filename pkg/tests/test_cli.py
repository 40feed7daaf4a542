import json
import subprocess
import sys

import pytest

from wallcross.errors import SolverError
from wallcross.shell import cli

from test_presets import copy_preset


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_markov_tree(capsys):
    doc = run_json(capsys, "markov", "tree", "--depth", "3")
    assert [1, 2, 5] in doc["triples"]
    assert len(doc["edges"]) == len(doc["triples"]) - 1


def test_atlas_mutate_writes_svg(capsys, tmp_path):
    svg = tmp_path / "b.svg"
    doc = run_json(capsys, "atlas", "mutate", "--path", "1,1,1:1,1,2:1,2,5", "--svg", str(svg))
    assert [s["weights"] for s in doc["steps"]] == [[1, 1, 1], [1, 1, 4], [1, 4, 25]]
    assert svg.read_text().startswith("<")


def test_atlas_bad_path(capsys):
    code, _, err = run(capsys, "atlas", "mutate", "--path", "1,1,1:1,2,5")
    assert code == 2 and "PathError" in err
    code, _, err = run(capsys, "atlas", "mutate", "--path", "1,x,1")
    assert code == 2


def test_chart_chain(capsys):
    doc = run_json(capsys, "chart", "chain", "--preset", "cp2-t1425")
    assert doc["steps"][-1]["terms"] == 10
    assert doc["compact"]["chart"] == ["u", "w"]


def test_classes(capsys):
    doc = run_json(capsys, "classes", "enumerate", "--preset", "p1xp1-t129")
    assert len(doc["classes"]) == 9
    doc = run_json(capsys, "classes", "match", "--preset", "cp2-t1425")
    assert doc["total_multiplicity"] == "41"
    assert sorted(doc["missing"]) == ["2H-5beta-2alpha", "H-2beta-alpha"]
    code, _, err = run(capsys, "classes", "enumerate", "--preset", "cp2-t1425", "--divisors", "y=0,z=0,D2")
    assert code == 2 and "unbounded" in err


def test_tropical(capsys, tmp_path):
    out = tmp_path / "fig9.svg"
    doc = run_json(capsys, "tropical", "render", "--figure", "fig9", "--svg", str(out))
    assert doc["discs"] == 10 and out.exists()
    doc = run_json(capsys, "tropical", "check", "--figure", "fig5", "--rebuild")
    assert doc["ok"] and [d["maslov"] for d in doc["discs"]] == [2, 2, 2, 2]
    assert run_json(capsys, "tropical", "slopes") == {"wall1_through_cut2": [5, -2], "wall2_through_cut1": [7, 2]}


def test_numeric(capsys):
    doc = run_json(capsys, "numeric", "certify", "--family", "h2b", "--m", "1", "--c", "1", "--r", "0.5",
                   "--t", "1e-3", "--steps", "64")
    assert doc["count"] == 4 and len(doc["solution_set"]["solutions"]) == 4
    doc = run_json(capsys, "numeric", "orbits")
    assert [doc[str(k)]["count"] for k in range(6)] == [1, 5, 10, 10, 5, 1]
    doc = run_json(capsys, "numeric", "limit", "--I", "1,3", "--theta", "0.4")
    assert doc["boundary_deviation"] < 1e-10
    code, _, _ = run(capsys, "numeric", "certify", "--family", "sextic", "--m", "1")
    assert code == 2


def test_certification_failure_exits_3(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise SolverError("did not converge")

    monkeypatch.setattr(cli.numeric, "solve_family_H2b", fail)
    code, _, err = run(capsys, "numeric", "certify", "--m", "2")
    assert code == 3 and "SolverError" in err


def test_floer(capsys):
    doc = run_json(capsys, "floer", "delta2", "--preset", "cp2-t1425", "--at", "w=0.125,u=2.25")
    assert doc["vanishes"]
    doc = run_json(capsys, "floer", "inflate", "--preset", "cp2-t1425")
    assert doc["kappa"] == "7/10" and doc["monotone"]
    code, _, err = run(capsys, "floer", "delta2", "--preset", "cp2-t1425", "--at", "u=2.25")
    assert code == 2
    code, _, err = run(capsys, "floer", "delta2", "--preset", "cp2-t1425", "--at", "u=abc,w=1")
    assert code == 2


def test_floer_crit_text(capsys, tmp_path):
    out = tmp_path / "crit.txt"
    code, _, _ = run(capsys, "floer", "crit", "--preset", "p1xp1-t129", "--out", str(out), "--threads", "2")
    assert code == 0
    assert "2 critical points" in out.read_text()


def test_report_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["report", "--preset", "p1xp1-t129", "--json", "--out", str(a)]) == 0
    assert cli.main(["report", "--preset", "p1xp1-t129", "--json", "--out", str(b), "--seed", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["ok"] and len(doc["stages"]["classes"]["matches"]) == 9


def test_report_with_corrupted_table(capsys, tmp_path):
    path, table = copy_preset(tmp_path)
    doc = json.loads(table.read_text())
    doc["maslov"] = "six"
    table.write_text(json.dumps(doc))
    code, _, err = run(capsys, "report", "--preset", str(path))
    assert code == 2 and "SchemaError" in err


def test_report_marks_failed_expectations(capsys, tmp_path):
    path, _ = copy_preset(tmp_path)
    doc = json.loads(path.read_text())
    doc["expect"]["enumerated"] = 11
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "report", "--preset", str(path), "--skip-numeric")
    assert code == 2
    assert "classes.enumerated: FAILED" in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "wallcross.shell.cli", "markov", "tree", "--depth", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "(1,1,2)" in res.stdout


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["markov"])
    assert exc.value.code == 2
