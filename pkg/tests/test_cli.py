import json

import pytest

from ordineq import cli
from ordineq.cli import main
from ordineq.errors import DegenerateSampleError

from .conftest import DATA_DIR


@pytest.fixture
def toy(tmp_path):
    cfg = {"groups": {"a": {"counts": [3, 1, 2]}, "b": {"counts": [1, 3, 2]}},
           "comparisons": [{"x": "a", "y": "b"}], "draws": 200, "seed": 4}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


@pytest.mark.parametrize("verb", ["estimate", "indices", "dominance", "curves", "density", "report"])
def test_verbs_succeed(toy, tmp_path, verb, capsys):
    out = tmp_path / verb
    assert main([verb, "--config", str(toy), "--out", str(out)]) == 0
    assert out.is_dir() and any(out.iterdir())
    assert capsys.readouterr().out


def test_report_contents(toy, tmp_path, capsys):
    out = tmp_path / "rep"
    assert main(["report", "--config", str(toy), "--out", str(out), "--draws", "300", "--seed", "9", "--render"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["metadata"]["draws"] == 300 and report["metadata"]["seed"] == 9
    assert (out / "fig_gl_curves.svg").exists()
    assert "Pr(No Dominance)" in (out / "report.txt").read_text()
    assert set(report["artifacts"]) <= {p.name for p in out.iterdir()}


def test_dominance_prints_table(toy, capsys):
    assert main(["dominance", "--config", str(toy)]) == 0
    text = capsys.readouterr().out
    assert "Pr[X >FSD Y]" in text and "Pr[Y >GLD X]" in text


def test_exit_code_parse_error(tmp_path, capsys):
    (tmp_path / "bad.csv").write_text("category,count\n1,3\n2,-1\n")
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"groups": {"a": {"counts": "bad.csv"}}}')
    assert main(["indices", "--config", str(cfg)]) == 2
    assert "bad.csv:3:" in capsys.readouterr().err


def test_exit_code_config_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"groups": {"a": {"counts": [1, 2]}}, "unknown": 1}')
    assert main(["indices", "--config", str(cfg)]) == 2
    assert main(["indices", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["indices", "--config", str(cfg.parent / "cfg.json"), "--draws", "0"]) == 2


def test_exit_code_bad_prior(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"groups": {"a": {"counts": [1, 2], "prior": [1, -1]}}, "draws": 10}')
    assert main(["indices", "--config", str(cfg)]) == 2
    assert "group 'a'" in capsys.readouterr().err


def test_exit_code_domain_error(toy, monkeypatch, capsys):
    # a valid configuration cannot provoke a numerical failure, so inject one
    def boom(*args, **kwargs):
        raise DegenerateSampleError("group 'a': zero-variance sample")

    monkeypatch.setattr(cli, "run_analysis", boom)
    assert main(["indices", "--config", str(toy)]) == 3
    assert "zero-variance" in capsys.readouterr().err


def test_shipped_microdata_config(tmp_path):
    assert main(["dominance", "--config", str(DATA_DIR / "microdata_example.json"), "--draws", "300"]) == 0
