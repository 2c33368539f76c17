import csv
import io
import json

import pytest

from twoquadrics import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--suite", "lattice")
    assert code == 0
    lines = out.strip().splitlines()
    assert all(l.startswith("PASS") for l in lines[:-1])
    assert lines[-1].startswith(f"{len(lines) - 1}/{len(lines) - 1} checks passed")


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--suite", "mcd", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["schema"] == 1 and data["n"] == 2 and data["suite"] == "mcd"
    assert all({"id", "anchor", "expected", "computed", "pass"} <= set(c) for c in data["checks"])
    assert data["pass"] is True and all(c["pass"] for c in data["checks"])


def test_verify_csv(capsys, tmp_path):
    path = tmp_path / "report.csv"
    code, out, _ = run(capsys, "verify", "--n", "2", "--suite", "mcd", "--format", "csv",
                       "--out", str(path))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert rows and all(r["pass"] == "True" for r in rows)


@pytest.mark.parametrize("argv", [
    ("verify", "--n", "3"),
    ("verify", "--n", "10"),
    ("verify", "--n", "0"),
    ("verify", "--n", "2", "--suite", "nope"),
    ("export", "nope", "--n", "2"),
    ("chamber", "--n", "2", "--class", "1", "2"),
    ("chamber", "--n", "2", "--class", "1,x,0,0,0,0"),
    ("frobnicate",),
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_unknown_object_message(capsys):
    code, _, err = run(capsys, "export", "nope", "--n", "2")
    assert code == 2 and "cones.E" in err


def test_chamber_anticanonical(capsys):
    code, out, _ = run(capsys, "chamber", "--n", "4", "--basis", "KE", "--class", "1,0,0,0,0,0,0,0")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["region"] == "Fano chamber"
    assert data["effective"] and data["movable"] and not data["nef"]
    assert data["alpha"] == ["0"] * 7 or data["alpha"] == [0] * 7


def test_chamber_vertex_and_wall(capsys):
    _, out, _ = run(capsys, "chamber", "--n", "4", "--class", "0", "1", "0", "0", "0", "0", "0", "0")
    assert json.loads(out)["region"] == "vertex of Delta"
    _, out, _ = run(capsys, "chamber", "--n", "4", "--class", "2,-1,-1,-1,-1,-1,-1,-1")
    data = json.loads(out)
    assert data["region"] == "wall"
    walls = [w for w in data["walls_containing"] if "k" in w]
    assert len(walls) == 21 and all(w["k"] == 3 and len(w["I"]) == 2 for w in walls)


def test_chamber_not_effective(capsys):
    code, out, _ = run(capsys, "chamber", "--n", "2", "--class", "-1,0,0,0,0,0")
    data = json.loads(out)
    assert code == 0 and data["effective"] is False and data["region"] == "not effective"


def test_chamber_nearest(capsys):
    _, out, _ = run(capsys, "chamber", "--n", "2", "--class", "3,-1,-1,-1,-1,-1", "--nearest", "3")
    data = json.loads(out)
    assert len(data["nearest_walls"]) == 3
    d = [w["distance_squared"] for w in data["nearest_walls"]]
    from fractions import Fraction
    assert [Fraction(x) for x in d] == sorted(Fraction(x) for x in d)


@pytest.mark.parametrize("obj, n, count", [
    ("cones.E", 2, 16), ("cones.E", 4, 64), ("cones.E_dual", 2, 26), ("cones.Delta", 2, 16),
    ("planes", 2, 16),
])
def test_export_counts(capsys, obj, n, count):
    code, out, _ = run(capsys, "export", obj, "--n", str(n), "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    kinds = {r.get("kind") for r in rows}
    main = [r for r in rows if r.get("kind") in (None, "ray", "vertex", "label", "element")]
    assert len(main) == count, kinds


def test_export_weyl_generators(capsys):
    _, out, _ = run(capsys, "export", "weyl.generators", "--n", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert sum(r["group"] == "W'" for r in rows) == 16
    assert sum(r["group"] != "W'" for r in rows) == 5


def test_export_json_envelope(capsys):
    code, out, _ = run(capsys, "export", "factorization", "--n", "4")
    data = json.loads(out)
    assert code == 0
    assert (data["schema"], data["object"], data["n"]) == (1, "factorization", 4)
    assert data["data"]["counts"]["total"] == 64
    assert [s["count"] for s in data["data"]["steps"]] == [22]


@pytest.mark.parametrize("obj", sorted(cli.EXPORTS))
def test_export_deterministic(capsys, obj):
    _, a, _ = run(capsys, "export", obj, "--n", "2")
    _, b, _ = run(capsys, "export", obj, "--n", "2")
    assert a == b
    json.loads(a)


def test_export_cap(capsys):
    code, _, _ = run(capsys, "export", "cones.E", "--n", "10")
    assert code == 2
