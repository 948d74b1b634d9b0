import json
import math

import numpy as np
import pytest

from sphdesigns.cli import main
from sphdesigns.polytope import parse_obj


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_text(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    ico = next(line for line in out.splitlines() if line.startswith("icosahedron "))
    fields = ico.split()
    assert fields[1:5] == ["H3", "5", "12", "30"]
    assert float(fields[5]) == pytest.approx(2 * 30 * math.acos(1 / math.sqrt(5)), abs=1e-9)
    e8 = next(line for line in out.splitlines() if line.startswith("4_21"))
    assert "240" in e8 and "6720" in e8 and "not certifiable" in e8


def test_catalog_filter_and_json_round_trip(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) > 40
    assert json.dumps(rows, sort_keys=True, indent=2) + "\n" == out
    _, out, _ = run(capsys, "catalog", "--filter", "demicube", "--format", "json")
    assert {r["name"] for r in json.loads(out)} == {"4-demicube", "5-demicube", "6-demicube"}


@pytest.mark.parametrize(
    "argv, code",
    [
        (["--cycle", "octahedron", "--t", "3"], 0),
        (["--cycle", "tetrahedron", "--t", "3"], 1),
        (["--cycle", "icosahedron"], 0),
        (["--great-circle", "cube"], 0),
        (["--hybrid", "dodecahedron:icosahedron"], 0),
        (["--hybrid", "600-cell:120-cell"], 0),
        (["--elementary", "ii"], 0),
        (["--elementary", "1", "--t", "3"], 1),
        (["--cubature", "h4-weighted"], 0),
    ],
)
def test_certify_exit_codes(capsys, argv, code):
    got, out, _ = run(capsys, "certify", *argv)
    report = json.loads(out)
    assert got == code
    assert report["certified"] == (code == 0)
    assert json.dumps(report, sort_keys=True, indent=2) + "\n" == out


def test_certify_19_full_sweep(capsys):
    code, out, _ = run(capsys, "certify", "--hybrid", "600-cell:120-cell", "--t", "19", "--full-sweep")
    report = json.loads(out)
    assert code == 0 and report["full_sweep"]
    assert max(report["cert_report"]["residuals_by_degree"][:20]) < 1e-9


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "--cycle", "no-such-polytope"],
        ["certify", "--hybrid", "cube:icosahedron"],
        ["certify", "--cycle", "octahedron", "--tol", "0"],
        ["certify", "--cycle", "octahedron", "--t", "-1"],
        ["molien", "E8"],
        ["beta", "cube:dodecahedron"],
        ["certify", "--cycle", "4_21"],
    ],
)
def test_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert set(payload) == {"error", "message"}


def test_beta(capsys):
    code, out, _ = run(capsys, "beta", "600-cell:120-cell")
    data = json.loads(out)
    assert code == 0
    assert data["beta"] == pytest.approx(176 / 301, abs=1e-12)
    assert data["abs_diff"] < 1e-12


def test_molien(capsys):
    code, out, _ = run(capsys, "molien", "H3", "--lmax", "11")
    assert code == 0
    assert json.loads(out)["dims"] == [1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0]


def test_covering(capsys):
    code, out, _ = run(capsys, "covering", "--hybrid", "octahedron:cube", "--n-test", "5000", "--seed", "4")
    data = json.loads(out)
    assert code == 0 and 0 < data["covering_radius"] < 1.0 and data["seed"] == 4


def test_export_csv(capsys, tmp_path):
    path = tmp_path / "oct.csv"
    code, out, _ = run(capsys, "export", "--cycle", "octahedron", "--format", "csv-polyline",
                       "--samples", "32", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and out == ""
    assert len(lines) == 1 + 12 * 32


def test_export_hybrid_json(capsys):
    code, out, _ = run(capsys, "export", "--hybrid", "dodecahedron:icosahedron")
    data = json.loads(out)
    assert code == 0
    assert len(data["points"]) == 12
    assert np.array(data["polyline"]).shape == (30 * 2, 32, 3)


def test_export_obj_round_trip(capsys, tmp_path):
    path = tmp_path / "ico.obj"
    code, _, _ = run(capsys, "export", "--hybrid", "dodecahedron:icosahedron", "--format", "obj",
                     "--out", str(path))
    verts, lines = parse_obj(path.read_text())
    assert code == 0
    assert np.all(np.abs(np.linalg.norm(verts, axis=1) - 1) < 1e-6)
    assert len(lines) == 60 * 31


def test_export_polytope_obj(capsys):
    code, out, _ = run(capsys, "export", "--polytope", "24-cell", "--format", "obj")
    verts, lines = parse_obj(out)
    assert code == 0 and verts.shape == (24, 4) and len(lines) == 96


def test_report_file_round_trip(capsys, tmp_path):
    path = tmp_path / "rep.json"
    run(capsys, "certify", "--cycle", "octahedron", "--out", str(path))
    text = path.read_text()
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n" == text
