import csv
import io
import json

import pytest

from quadlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_writes_a_loadable_knot(capsys):
    code, out, _ = run(capsys, "gen", "k6")
    assert code == 0
    assert len(json.loads(out)["vertices"]) == 6


def test_gen_unknown_name(capsys):
    code, _, err = run(capsys, "gen", "bogus")
    assert code == 2
    assert "error" in err


def test_analyze_k6_json(capsys):
    code, out, _ = run(capsys, "analyze", "builtin:k6", "--no-timing", "--threads", "1")
    data = json.loads(out)
    assert code == 0
    assert data["quadrisecants"]["count"] == 1
    assert data["quadrisecants"]["lines"][0]["edges"] == [1, 2, 4, 5]
    assert data["verdict"] == "FAILS-embedding"
    assert "timing_seconds" not in data


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "builtin:k6", "--format", "text", "--threads", "1")
    assert code == 0
    assert "quadrisecants: 1" in out
    assert out.strip().endswith("verdict: FAILS-embedding")


def test_analyze_rejects_a_triangle(capsys, tmp_path):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps({"vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]}))
    code, out, _ = run(capsys, "analyze", str(path), "--no-timing", "--threads", "1")
    assert code == 2
    assert "errors" in json.loads(out)


def test_analyze_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert main(["analyze", "builtin:k14", "--no-timing", "--threads", "1", "-o", str(target)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_conjecture_on_k14(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify-conjecture", "builtin:k14", "--threads", "1", "--report", str(report))
    assert code == 0
    assert out.startswith("FAILS-type")
    assert json.loads(report.read_text())["verdict"] == "FAILS-type"


@pytest.fixture
def k6_report(tmp_path):
    path = tmp_path / "k6.report.json"
    assert main(["analyze", "builtin:k6", "--no-timing", "--threads", "1", "-o", str(path)]) == 0
    return path


def test_export_obj(capsys, tmp_path):
    knot = tmp_path / "k6.json"
    main(["gen", "k6", "-o", str(knot)])
    code, out, _ = run(capsys, "export", str(knot), "--format", "obj")
    assert code == 0
    assert sum(line.startswith("v ") for line in out.splitlines()) == 6


def test_export_report_csv_lists_secant_points(capsys, k6_report):
    code, out, _ = run(capsys, "export", str(k6_report), "--format", "csv", "--precision", "30")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["line", "edge", "parameter", "x", "y", "z"]
    assert len(rows) == 5
    assert sorted(float(r[3]) for r in rows[1:]) == [0.0, 1.0, 3.0, 4.0]


def test_export_json_round_trips(capsys, k6_report):
    code, out, _ = run(capsys, "export", str(k6_report), "--format", "json")
    assert code == 0
    assert json.loads(out) == json.loads(k6_report.read_text())


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QUADLAB_SEED", "not-a-number")
    code, _, err = run(capsys, "gen", "k6")
    assert code == 2
    monkeypatch.setenv("QUADLAB_SEED", "11")
    code, out, _ = run(capsys, "analyze", "builtin:k6", "--no-timing", "--threads", "1")
    assert code == 0 and json.loads(out)["verdict"] == "FAILS-embedding"


def test_construct_k_star(capsys, tmp_path):
    out_path = tmp_path / "star.json"
    code, _, err = run(capsys, "construct", "k-star", "builtin:quadrilateral", "-o", str(out_path))
    assert code == 0
    assert len(json.loads(out_path.read_text())["vertices"]) == 10
    transcript = json.loads((tmp_path / "star.json.transcript.json").read_text())
    assert transcript["edges_out"] == 10
    assert "4 -> 10" in err
