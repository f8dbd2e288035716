import json

import pytest

from denomlab.cli import main, render


@pytest.fixture
def hexagon_file(tmp_path):
    path = tmp_path / "hexagon.json"
    path.write_text(json.dumps({"genus": 0, "boundary": [6], "punctures": 0}))
    return str(path)


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps({"genus": 0, "boundary": [4], "punctures": 1}))
    return str(path)


def run(args):
    return main(args)


def test_oracle_passes(hexagon_file, capsys):
    assert run(["check-oracle", "--surface", hexagon_file]) == 0
    out = capsys.readouterr().out
    assert "verdict: PASS" in out


def test_injectivity_json_roundtrip(hexagon_file, tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = run(["check-injectivity", "--surface", hexagon_file,
                "--format", "json", "--out", str(out_path)])
    assert code == 0
    report = json.loads(out_path.read_text())
    assert report["pass"] is True
    assert report["counts"]["clusters"] == 14
    # the report subcommand re-renders saved reports
    assert run(["report", "--in", str(out_path), "--format", "csv"]) == 0
    csv_out = capsys.readouterr().out
    assert "denominators-injective" in csv_out


def test_reports_deterministic(square_file, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert run(["check-oracle", "--surface", square_file,
                    "--format", "json", "--out", str(path)]) == 0
    blobs = []
    for path in paths:
        data = json.loads(path.read_text())
        data.pop("duration_ms")
        blobs.append(json.dumps(data, sort_keys=True))
    assert blobs[0] == blobs[1]


def test_negative_control_fails_with_witness(capsys):
    assert run(["negative-control", "--format", "json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["pass"] is False
    failing = [c for c in report["checks"] if not c["pass"]]
    assert failing and "witness" in failing[0]
    witness = failing[0]["witness"]
    assert len(witness["monomials"]) == 2
    assert witness["monomials"][0] != witness["monomials"][1]


def test_usage_errors(tmp_path):
    missing = str(tmp_path / "nope.json")
    assert run(["check-oracle", "--surface", missing]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"genus": 0, "boundary": [3], "punctures": 0}))
    assert run(["check-oracle", "--surface", str(bad)]) == 2
    assert run(["unknown-command"]) == 2


def test_build_strong_cli(tmp_path, capsys):
    surface = tmp_path / "dd.json"
    surface.write_text(json.dumps({"genus": 0, "boundary": [4], "punctures": 2}))
    assert run(["build-strong", "--surface", str(surface),
                "--count", "15", "--seed", "5"]) == 0
    assert "all-outputs-strong-admissible" in capsys.readouterr().out


def test_render_formats():
    report = {
        "scenario": "demo", "config_echo": {}, "counts": {},
        "checks": [{"name": "x", "pass": False, "cases": 1,
                    "witness": {"why": "because"}}],
        "flags": ["bounded-evidence"], "pass": False, "duration_ms": 1,
    }
    text = render(report, "text")
    assert "[FAIL] x" in text and "bounded-evidence" in text
    assert "because" in render(report, "csv")
    assert json.loads(render(report, "json"))["pass"] is False
