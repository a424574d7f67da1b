import json

import pytest

from divtorsion.cli import main


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("DIVTORSION_CACHE", str(tmp_path / "cache"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_divpoly_F3(capsys):
    code, out, _ = run(capsys, "divpoly", "F", "3")
    assert code == 0
    assert out.strip() == "x^4 + 1/3*b2*x^3 + b4*x^2 + b6*x + 1/12*b2*b6 + -1/12*b4^2"


def test_cache_written_and_reused(capsys, tmp_path):
    path = str(tmp_path / "c.tsv")
    _, first, _ = run(capsys, "divpoly", "f", "5", "--cache", path)
    _, second, _ = run(capsys, "divpoly", "f", "5", "--cache", path)
    _, third, _ = run(capsys, "divpoly", "f", "5", "--no-cache")
    assert first == second == third
    assert open(path).read().startswith("f\t5\t")


def test_totient_collide_json(capsys):
    code, out, _ = run(capsys, "totient", "collide", "--k", "3", "--bound", "30000", "--json")
    assert code == 0
    data = json.loads(out)
    assert [28268, 28710] in [c["n"] for c in data["classes"]]


def test_totient_csv(capsys, tmp_path):
    path = tmp_path / "d.csv"
    code, _, _ = run(capsys, "totient", "dcollide", "--bound", "70", "--csv", str(path))
    assert code == 0
    assert "55 57 62 66" in path.read_text()


def test_prop20(capsys):
    code, out, _ = run(capsys, "totient", "prop20", "--part", "A", "--bound", "1000")
    assert code == 0 and "[7, 8]" in out


def test_closedform_json(capsys):
    code, out, _ = run(capsys, "closedform", "7")
    assert code == 0 and json.loads(out)["C020"] == "-211/2"


def test_verify_commands(capsys):
    assert run(capsys, "verify", "mckee", "--nmax", "9")[0] == 0
    assert run(capsys, "verify", "recurrences", "--nmax", "12")[0] == 0
    assert run(capsys, "verify", "closedforms", "--nmax", "6", "--json")[0] == 0
    assert run(capsys, "verify", "lattice", "--nmax", "8")[0] == 0


def test_family_commands(capsys):
    code, out, _ = run(capsys, "family", "edelta-F", "--n", "3")
    assert out.strip() == "delta*x^4 + 2*delta^2*x^3 + -2*x + -1*delta"
    code, out, _ = run(capsys, "family", "klein-check", "--s", "2", "--t", "1")
    assert code == 0 and json.loads(out)["passed"]
    code, _, err = run(capsys, "family", "klein-check", "--s", "1", "--t", "0")
    assert code == 2 and "singular" in err
    code, out, _ = run(capsys, "family", "hesse", "--lam", "1/2", "--json")
    assert code == 0 and len(json.loads(out)["values"]) == 3


def test_intersect14_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "intersect14", "build", "--root", "0")
    assert code == 0
    path = tmp_path / "cert.json"
    path.write_text(out)
    code, out, _ = run(capsys, "intersect14", "verify", "--file", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    data["u"]["re"] = "1.5"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "intersect14", "verify", "--file", str(path))
    assert code == 1 and "verification failed" in err


def test_intersect14_symbolic(capsys):
    code, out, _ = run(capsys, "intersect14", "symbolic", "--json")
    data = json.loads(out)
    assert code == 0 and data["matches_display"]
    assert data["resultant"]["power_of_two"] == 48


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["divpoly", "F", "3", "--prec", "10"])
    assert exc.value.code == 2
    assert "--prec" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["totient", "collide", "--bound", "10"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "intersect14", "build", "--root", "30")
    assert code == 2 and "--root" in err
    code, _, err = run(capsys, "intersect14", "verify", "--file", "/nonexistent.json")
    assert code == 2 and "--file" in err
