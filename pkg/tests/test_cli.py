import json

from intschur.cli import main


def run(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr()


def test_verify_schur_passes(capsys):
    code, out = run(capsys, "verify-schur", "--n", "2", "--d", "2")
    assert code == 0
    data = json.loads(out.out)
    assert data["verdict"] == "pass"
    assert {"config", "sections"} <= set(data)
    for s in data["sections"]:
        assert {"theorem", "verdict", "tables", "torsion"} <= set(s)


def test_verify_schur_degenerate(capsys):
    assert run(capsys, "verify-schur", "--n", "1", "--d", "3")[0] == 0
    assert run(capsys, "verify-schur", "--n", "2", "--d", "0")[0] == 0


def test_verify_grassmannian_kronecker(capsys):
    code, out = run(capsys, "verify-grassmannian", "--k", "1", "--n", "2", "--mod", "2")
    assert code == 0
    data = json.loads(out.out)
    assert data["sections"][0]["tables"]["name"] == "Kronecker path algebra"


def test_verify_grassmannian_point(capsys):
    code, out = run(capsys, "verify-grassmannian", "--k", "0", "--n", "5", "--format", "markdown")
    assert code == 0
    assert "pass" in out.out


def test_usage_errors(capsys):
    assert run(capsys, "verify-grassmannian", "--k", "3", "--n", "2")[0] == 3
    assert run(capsys, "verify-grassmannian", "--k", "1", "--n", "7")[0] == 3
    assert run(capsys, "verify-grassmannian", "--k", "1", "--n", "2", "--mod", "4")[0] == 3
    assert run(capsys, "verify-schur", "--n", "2")[0] == 3
    assert run(capsys, "bogus")[0] == 3


def test_export_round_trip(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "export", "--k", "1", "--n", "2", "--out", str(a))[0] == 0
    assert run(capsys, "export", "--k", "1", "--n", "2", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["algebra"]["rank"] == 4
    assert all(isinstance(x, str) for x in data["algebra"]["unit"])
    assert data["algebra"]["basis"][0].startswith("A_1[")
    assert any(l.startswith("M_{1,0}[") for l in data["algebra"]["basis"])
    assert run(capsys, "import", str(a))[0] == 0


def test_tables(capsys):
    code, out = run(capsys, "table", "dual-pairing", "--k", "1", "--n", "2")
    assert code == 0
    assert json.loads(out.out)["degree0"] == [[1, 0], [0, 1]]
    code, out = run(capsys, "table", "schur", "--k", "2", "--n", "4")
    assert len(json.loads(out.out)["degree0"]) == 6
    code, out = run(capsys, "table", "weyl", "--k", "0", "--n", "3")
    assert json.loads(out.out)["degree0"] == [[1]]
