"""Command-line behavior: exit codes, overrides, error reporting."""

import csv
import json
import os

from ftsample.cli import main

CONC = """
[experiment]
kind = "delta-concentration-sweep"
seed = 7
trials = 5

[experiment.grid]
p = [5]
q_multiplier = [3]

[output]
path = "%s"
"""


def _write(tmp_path, text, name="cfg.toml"):
    f = tmp_path / name
    f.write_text(text)
    return str(f)


def test_run_exit_zero_and_outputs(tmp_path, capsys):
    out = str(tmp_path / "results")
    cfg = _write(tmp_path, CONC % out)
    assert main(["run", "--config", cfg, "--jobs", "1"]) == 0
    stdout = capsys.readouterr().out
    assert "delta-concentration-sweep" in stdout
    assert os.path.isfile(os.path.join(out, "results.csv"))
    assert os.path.isfile(os.path.join(out, "manifest.json"))


def test_run_overrides_seed_out_and_format(tmp_path):
    cfg = _write(tmp_path, CONC % str(tmp_path / "ignored"))
    out = str(tmp_path / "override")
    assert main(["run", "--config", cfg, "--jobs", "1", "--seed", "9", "--out", out, "--format", "json"]) == 0
    with open(os.path.join(out, "manifest.json")) as f:
        m = json.load(f)
    assert m["config"]["seed"] == 9
    assert m["config"]["out_path"] == out
    with open(os.path.join(out, "results.json")) as f:
        assert isinstance(json.load(f), list)
    assert not os.path.exists(str(tmp_path / "ignored"))


def test_run_exit_one_on_failed_checks(tmp_path):
    text = """
[experiment]
kind = "phase-sum-sweep"
seed = 2
trials = 30

[experiment.grid]
p = [5]

[output]
path = "%s"
""" % str(tmp_path / "ps")
    cfg = _write(tmp_path, text)
    assert main(["run", "--config", cfg, "--jobs", "1"]) == 1


def test_config_errors_exit_two(tmp_path, capsys):
    cfg = _write(tmp_path, '[experiment]\nkind = "wat"\n')
    assert main(["validate", "--config", cfg]) == 2
    err = capsys.readouterr().err
    assert "config error: experiment.kind:" in err


def test_missing_file_exits_two(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "absent.toml")]) == 2
    assert "error" in capsys.readouterr().err


def test_validate_happy_path(tmp_path, capsys):
    cfg = _write(tmp_path, CONC % "x")
    assert main(["validate", "--config", cfg]) == 0
    assert "delta-concentration-sweep" in capsys.readouterr().out


def test_figure_writes_csv(tmp_path, capsys):
    out = str(tmp_path / "fig.csv")
    assert main(["figure", "--kind", "delta-response", "--p", "8", "--q", "64", "--j", "3", "--out", out]) == 0
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 64
    peak = max(rows, key=lambda r: float(r["image_mag"]))
    assert peak["index"] == "24"


def test_figure_rejects_cramped_domain(tmp_path, capsys):
    rc = main(["figure", "--kind", "delta-response", "--p", "8", "--q", "12", "--j", "0",
               "--out", str(tmp_path / "f.csv")])
    assert rc == 2
    assert "config error" in capsys.readouterr().err
