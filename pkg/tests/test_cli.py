import json

import pytest

from symatch.cli import EXIT_CONFIG, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_codes_list(capsys):
    code, out, _ = run(capsys, "codes", "list", "--emit", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 10
    gt = next(r for r in rows if r["name"] == "GT240")
    assert gt["k"] == 8 and gt["k_listed"] == 12
    code, out, _ = run(capsys, "codes", "list")
    assert "BB144" in out and "listed k=12" in out


def test_sweep_json_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--code", "TC4", "--decoder", "symatch", "--p", "0.01,0.05",
                       "--shots", "32", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and [r["p"] for r in doc["records"]] == [0.01, 0.05]
    assert doc["spec"]["seed"] == 7
    target = tmp_path / "r.csv"
    code, _, err = run(capsys, "sweep", "--code", "TC4", "--p", "0.05", "--shots", "8", "--out", str(target))
    assert code == 0 and "wrote" in err
    assert target.read_text().splitlines()[0] == "code,decoder,p,LER,stderr,shots,failures"


def test_sweep_bp_options(capsys):
    code, out, _ = run(capsys, "sweep", "--code", "TC4", "--decoder", "bp-symatch", "--p", "0.05",
                       "--shots", "16", "--max-iters", "5", "--prior", "3/32")
    assert code == 0
    assert json.loads(out)["spec"]["config"] == {"max-iters": 5, "prior": "3/32"}


def test_exhaust(capsys):
    code, out, _ = run(capsys, "exhaust", "--code", "D36", "--decoder", "symatch", "--weight", "1",
                       "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2 and lines[1].startswith("D36,symatch,1,36,0,0,0")


def test_config_errors_exit_nonzero(capsys):
    assert run(capsys, "exhaust", "--code", "gross", "--weight", "5")[0] == EXIT_CONFIG
    assert run(capsys, "sweep", "--code", "nope", "--p", "0.1", "--shots", "1")[0] == EXIT_CONFIG
    assert run(capsys, "sweep", "--code", "TC4", "--decoder", "x", "--p", "0.1", "--shots", "1")[0] == EXIT_CONFIG
    with pytest.raises(SystemExit):
        main(["sweep", "--code", "TC4", "--p", "a,b", "--shots", "1"])


def test_symmetries(capsys):
    code, out, _ = run(capsys, "symmetries", "--code", "gross", "--emit", "json")
    rep = json.loads(out)
    assert code == 0 and rep["symmetries"] == 6 and rep["gauss_kernel_agree"] and rep["even_parity"]
    assert rep["directions"]["horizontal"]["working_shape"] == [12, 12, 0]
    code, out, _ = run(capsys, "symmetries", "--code", "TC4")
    assert "1 independent Z-symmetries" in out


def test_topology(capsys):
    code, out, _ = run(capsys, "topology", "--code", "TC4")
    rep = json.loads(out)
    assert code == 0 and (rep["K"], rep["Rx"], rep["Ry"], rep["symmetryCount"]) == (1, 1, 1, 2)
    code, out, _ = run(capsys, "topology", "--code", "GT98")
    rep = json.loads(out)
    assert rep["symmetryCount"] is None and "exceeds" in rep["note"]
