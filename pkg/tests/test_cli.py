import json

import pytest

from psl.cli import main
from psl.constructors import make_OC
from psl.field import FieldSpec
from psl.forms import parse_form
from psl.harness import sample_stratum, trial_rng
from psl.presentation import SheafMorphism

F7 = FieldSpec(7)


def write(tmp_path, name, phi):
    path = tmp_path / name
    path.write_text(json.dumps(phi.to_json()))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_classify_json(tmp_path, capsys):
    path = write(tmp_path, "oc1.json", make_OC(parse_form("x0^4 + x1^4 + x2^4", F7), 1).phi)
    code, out = run(capsys, "classify", "--input", path)
    rep = json.loads(out)
    assert code == 0
    assert rep["schema_version"] == 1
    assert (rep["row"], rep["triple"], rep["codim"], rep["shape_match"]) == ("X2(4,2)", [1, 1, 3], 3, True)


def test_classify_table(tmp_path, capsys):
    path = write(tmp_path, "x.json", sample_stratum("X1(4,4)", F7, trial_rng(1)).phi)
    code, out = run(capsys, "classify", "--input", path, "--format", "table")
    assert code == 0
    assert "X1(4,4)" in out and "O(-2)+O(-1) -> O+O(1)" in out


def test_classify_no_match_exit_code(tmp_path, capsys):
    phi = SheafMorphism((1, -3), (2, 0), [["x0", 0], [0, "x0^3 + x1^3 + x2^3"]], F7)
    code, out = run(capsys, "classify", "--input", write(tmp_path, "bad.json", phi))
    assert code == 2
    assert json.loads(out)["no_matching_stratum"]


def test_cohomology_report(tmp_path, capsys):
    path = write(tmp_path, "f.json", sample_stratum("X1(4,1)", F7, trial_rng(2)).phi)
    code, out = run(capsys, "cohomology", "--input", path, "--verify")
    rep = json.loads(out)
    assert code == 0
    assert (rep["r"], rep["chi"]) == (4, 1)
    assert rep["vanishing_ok"] is True
    assert rep["table"]["h1_FOmega"] == 3
    assert rep["monad"]["consistent"]


def test_stability_dispatch(tmp_path, capsys):
    phi = sample_stratum("X1(4,2)", F7, trial_rng(3)).phi
    path = write(tmp_path, "w.json", phi)
    code, out = run(capsys, "stability", "--input", path)
    rep = json.loads(out)
    assert code == 0 and rep["test"] == "g_semistable_exact" and rep["status"] == "semistable"
    code, out = run(capsys, "stability", "--input", path, "--mode", "mc", "--trials", "20", "--seed", "4")
    rep = json.loads(out)
    assert rep["status"] == "no_instability_found" and rep["seed"] == 4
    code, out = run(capsys, "stability", "--input", path, "--mode", "exhaustive", "--polarization", "3/10,2/5,2/5,3/10")
    assert json.loads(out)["test"] == "gred_semistable"


def test_stability_5C_and_kronecker(tmp_path, capsys):
    phi = SheafMorphism((-2, -1), (0, 1), [["x0*x1", "x0"], ["x1^3", "x2^2"]], F7)
    code, out = run(capsys, "stability", "--input", write(tmp_path, "c.json", phi))
    rep = json.loads(out)
    assert rep["test"] == "stability_5C" and rep["status"] == "strictly_semistable"
    phi = sample_stratum("X0(4,4)", F7, trial_rng(5)).phi
    code, out = run(capsys, "stability", "--input", write(tmp_path, "k.json", phi))
    assert json.loads(out)["test"] == "reducibility_44"


def test_delta_check(capsys, tmp_path):
    out_path = tmp_path / "d.json"
    code, _ = run(capsys, "delta-check", "--trials", "30", "--seed", "1", "--out", str(out_path))
    rep = json.loads(out_path.read_text())
    assert code == 0 and rep["agreements"] == 30 and rep["violations"] == []
    code, _ = run(capsys, "delta-check", "--field", "Q", "--trials", "5")
    assert code == 0


def test_scans(capsys):
    code, out = run(capsys, "census", "--trials", "2", "--chi", "2")
    rep = json.loads(out)
    assert code == 0 and rep["rows_total"] == 3
    code, out = run(capsys, "vanishing-scan", "--trials", "6", "--format", "table")
    assert code == 0 and "violations: 0" in out
    code, out = run(capsys, "clifford-scan", "--trials", "6", "--field", "F5")
    assert code == 0 and json.loads(out)["config"]["field"] == "F5"


def test_census_byte_identical(capsys):
    _, a = run(capsys, "census", "--trials", "2", "--seed", "8")
    _, b = run(capsys, "census", "--trials", "2", "--seed", "8")
    assert a == b


def test_errors_map_to_exit_one(tmp_path, capsys):
    assert main(["classify", "--input", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": "Q", "source": [-1], "target": [0], "entries": [["x0^2"]]}')
    assert main(["cohomology", "--input", str(bad)]) == 1


def test_stdin_input(monkeypatch, capsys):
    import io

    phi = make_OC(parse_form("x0^4 + x1^4 + x2^4", F7), 0).phi
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(phi.to_json())))
    code, out = run(capsys, "classify", "--input", "-")
    rep = json.loads(out)
    assert code == 0 and rep["normalizing_twist"] == 1 and rep["row"] == "X2(4,2)"


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert "psl" in capsys.readouterr().out
