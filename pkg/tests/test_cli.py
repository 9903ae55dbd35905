"""CLI surface: run/presets/check, preset-name resolution, exit codes."""

import json

import pytest
from click.testing import CliRunner

from ozo.cli import main

TINY = """
name = "clitiny"
alpha = {law = "constant", alpha = "auto"}
h = {law = "constant", h = 1e-4}

[problem]
kind = "convex-pl"
lambda = 10.0

[run]
replicates = 2

[scale.desk]
d = 6
budget = 31
ells = [1, 2]
"""


@pytest.fixture()
def runner():
    return CliRunner()


def _cfg(tmp_path, text=TINY):
    p = tmp_path / "clitiny.toml"
    p.write_text(text, encoding="utf-8")
    return p


def test_presets_lists_figure_configs(runner):
    res = runner.invoke(main, ["presets"])
    assert res.exit_code == 0
    for name in ("fig1-left", "fig2-center", "fig3-right", "fig4-left"):
        assert name in res.output


def test_check_prints_constants(runner):
    res = runner.invoke(main, ["check", "--config", "fig1-left"])
    assert res.exit_code == 0
    assert "Lambda=" in res.output
    assert "regime" in res.output


def test_run_writes_outputs(runner, tmp_path):
    out = tmp_path / "out"
    res = runner.invoke(main, [
        "run", "--config", str(_cfg(tmp_path)), "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    summary = json.loads((out / "summary.json").read_text())
    assert summary["experiment"] == "clitiny"
    assert "wrote" in res.output
    assert (out / "ell1" / "rep001.csv").is_file()


def test_run_seed_override_changes_streams(runner, tmp_path):
    cfg = _cfg(tmp_path)
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    for out, seed in ((a, []), (b, ["--seed", "99"]), (c, ["--seed", "99"])):
        res = runner.invoke(main, ["run", "--config", str(cfg), "--out", str(out)] + seed)
        assert res.exit_code == 0, res.output
    rel = "ell1/rep000.csv"
    assert (b / rel).read_bytes() == (c / rel).read_bytes()
    assert (a / rel).read_bytes() != (b / rel).read_bytes()


def test_bad_config_exits_2(runner, tmp_path):
    bad = _cfg(tmp_path, TINY.replace('kind = "convex-pl"', 'kind = "quartic"'))
    res = runner.invoke(main, ["run", "--config", str(bad), "--out", str(tmp_path / "o")])
    assert res.exit_code == 2
    assert "config error" in res.output


def test_unknown_preset_exits_2(runner):
    res = runner.invoke(main, ["run", "--config", "no-such-preset"])
    assert res.exit_code == 2
    assert "presets" in res.output


def test_unwritable_output_exits_3(runner, tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("a plain file where the output directory should go")
    res = runner.invoke(main, [
        "run", "--config", str(_cfg(tmp_path)), "--out", str(blocker),
    ])
    assert res.exit_code == 3
    assert "i/o error" in res.output
