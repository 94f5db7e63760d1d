import json

import pytest

from gameplap.cli import parse_and_run
from gameplap.grid import read_field_csv


def run(capsys, *argv):
    code = parse_and_run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_paverage(capsys):
    assert run(capsys, "paverage", "--p", "2", "--values", "1,2,3,4") == (0, "2.5\n", "")
    assert run(capsys, "paverage", "--p", "inf", "--values", "0,1,5")[1] == "2.5\n"
    assert run(capsys, "paverage", "--p", "1", "--values", "1,2,100")[1] == "2\n"


def test_paverage_errors(capsys):
    code, _, err = run(capsys, "paverage", "--p", "2", "--values", "1,x")
    assert code == 2 and "--values" in err
    code, _, err = run(capsys, "paverage", "--p", "0.5", "--values", "1")
    assert code == 2 and "--p" in err


def test_bad_direction_count(capsys):
    code, _, err = run(capsys, "solve", "--dirs", "6")
    assert code == 2
    assert "--dirs" in err and "multiple of 4" in err


@pytest.mark.parametrize("argv,flag", [
    (["solve", "--scheme", "elliptic", "--dt", "1e-4"], "--dt"),
    (["solve", "--dt", "1.0"], "--dt"),
    (["solve", "--beta", "1.5"], "--beta"),
    (["solve", "--levels", "0"], "--levels"),
    (["solve", "--n", "2"], "--n"),
    (["solve", "--tol", "0"], "--tol"),
    (["solve", "--probe", "1,2,3"], "--probe"),
    (["solve", "--p", "0.3"], "--p"),
    (["solve", "--problem", "radial", "--p", "1.5"], "--p"),
    (["solve", "--problem", "tugofwar", "--p", "3"], "--p"),
    (["solve", "--problem", "custom", "--F", "x"], "--problem"),
    (["solve", "--problem", "custom", "--bounds", "-1,1,-1,1", "--F", "x +"], "--F"),
    (["solve", "--f", "1"], "--f"),
    (["solve", "--problem", "radial", "--init", "perturbed-exact", "--problem", "bdry-xy"],
     "--init"),
])
def test_config_errors_name_the_flag(capsys, argv, flag):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert flag in err
    assert out == ""


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "solve", "--bogus")
    assert code == 2 and "--bogus" in err


def test_solve_radial_example(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "radial", "--p", "inf", "--n", "41",
                       "--dirs", "24", "--levels", "4", "--beta", "0.9", "--tol", "1e-5")
    assert code == 0
    report = json.loads(out)
    assert report["linf_error"] == pytest.approx(0.0156, abs=1e-3)
    assert report["config"]["scheme"] == "elliptic"


def test_outputs_are_deterministic(capsys, tmp_path):
    outs = []
    for tag in ("a", "b"):
        field, rep = tmp_path / f"{tag}.csv", tmp_path / f"{tag}.json"
        code, out, _ = run(capsys, "solve", "--n", "21", "--out-field", str(field),
                           "--out-report", str(rep), "--omit-timing")
        assert code == 0
        outs.append((field.read_bytes(), rep.read_bytes(), out))
    assert outs[0] == outs[1]
    x, y, u = read_field_csv(tmp_path / "a.csv")
    assert u.size == 21 * 21
    assert json.loads(outs[0][1])["seed"] is not None


def test_custom_problem(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "custom", "--bounds", "0,1,0,1",
                       "--p", "3", "--F", "x + 2*y", "--exact", "x + 2*y", "--n", "11",
                       "--tol", "1e-8", "--omit-timing")
    assert code == 0
    assert json.loads(out)["linf_error"] < 1e-6


def test_strict_max_iter(capsys):
    code, out, err = run(capsys, "solve", "--n", "21", "--tol", "1e-14", "--max-iter", "3",
                         "--strict")
    assert code == 1 and "not converged" in err
    code, _, _ = run(capsys, "solve", "--n", "21", "--tol", "1e-14", "--max-iter", "3")
    assert code == 0


def test_probe_and_tugofwar(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "tugofwar", "--n", "21", "--levels", "4",
                       "--beta", "0.8", "--probe", "0,0", "--probe-tol", "1e-6",
                       "--omit-timing")
    assert code == 0
    rep = json.loads(out)
    assert rep["config"]["nx"] == 41 and rep["config"]["ny"] == 21
    assert abs(rep["probe_value"] - 0.5) < 0.15


def test_multires(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "bdry-cubic", "--n", "81", "--dirs", "24",
                       "--tol", "1e-4", "--omit-timing")
    assert code == 0
    rep = json.loads(out)
    assert rep["config"]["init"] == "multires"
    assert len(rep["level_iterations"]) == 3


def test_consistency(capsys):
    code, out, _ = run(capsys, "consistency", "--phi", "quadratic", "--at", "1,1", "--p", "3")
    assert code == 0
    err = float(out.splitlines()[-1].split()[-1])
    assert err < 1e-2
    assert run(capsys, "consistency", "--dirs", "10")[0] == 2


def test_table(capsys, tmp_path):
    csv = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--table", "1", "--max-nodes", "41", "--directions", "16",
                       "--csv", str(csv), "--field-dir", str(tmp_path / "fields"),
                       "--omit-timing")
    assert code == 0
    assert out.startswith("# aronsson")
    assert len(csv.read_text().splitlines()) == 2
    assert len(list((tmp_path / "fields").glob("*.csv"))) == 1
    assert run(capsys, "table", "--table", "1", "--max-nodes", "5")[0] == 2
