import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from qweyl.cli import main

GOLDEN = Path(__file__).parent / "golden"
REGENERATE = os.environ.get("QWEYL_REGENERATE_GOLDEN") == "1"

CASES = {
    "expand_beta_d2.json": ["expand", "beta", "--order", "2", "--format", "json"],
    "expand_x3_d2.txt": ["expand", "X", "--coord", "3", "--order", "2"],
    "derive_momentum_d2.json": ["derive", "momentum", "--order", "2", "--skip-oracle", "--format", "json"],
    "derive_bfield_d2.json": ["derive", "bfield", "--order", "2", "--skip-oracle", "--format", "json"],
    "derive_bfield_d2.tex": ["derive", "bfield", "--order", "2", "--skip-oracle", "--format", "latex"],
    "verify_aq_series.json": ["verify-aq", "--order", "2", "--order", "3", "--format", "json"],
    "check_spq6.json": ["check-spq6", "--format", "json"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(autouse=True)
def no_output_dir(monkeypatch):
    monkeypatch.delenv("QWEYL_OUTPUT_DIR", raising=False)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    code, out, _ = run(CASES[name], capsys)
    assert code == 0
    path = GOLDEN / name
    if REGENERATE:
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")


class TestExitCodes:
    def test_mutation_fails(self, capsys):
        code, out, _ = run(["check-spq6", "--mutate", "--format", "json"], capsys)
        assert code == 1
        report = json.loads(out)
        assert report["pass"] is False

    @pytest.mark.parametrize(
        "argv",
        [
            ["expand", "beta", "--order", "-1"],
            ["expand", "beta", "--indices", "2"],
            ["expand", "qpower", "--indices", "2,7"],
            ["verify-aq", "--cutoff", "0"],
            ["check-spq6", "--q-special", "0"],
            ["oracle-convergence", "--theta", "0.1", "--theta", "0"],
            ["oracle-convergence", "--theta", "0.1"],
            ["derive", "curl"],
            ["no-such-command"],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == 2
        assert "usage" in err

    def test_help(self, capsys):
        code, out, _ = run(["--help"], capsys)
        assert code == 0 and "verify-aq" in out


class TestReports:
    def test_report_keys(self, capsys):
        _, out, _ = run(["expand", "P", "--coord", "2", "--order", "1", "--format", "json"], capsys)
        report = json.loads(out)
        assert set(report) == {"command", "config", "results", "discrepancies", "pass"}

    def test_text_view(self, capsys):
        _, out, _ = run(["expand", "beta", "--order", "1"], capsys)
        assert out.startswith("command: expand\npass: true\n")

    def test_latex_view(self, capsys):
        _, out, _ = run(["expand", "beta", "--order", "1", "--format", "latex"], capsys)
        assert r"\begin{align*}" in out and r"\partial_x" in out

    def test_numeric_verification(self, capsys):
        code, out, _ = run(["verify-aq", "--mode", "numeric", "--cutoff", "2", "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["config"]["theta"] == [0.3, 0.05]

    def test_q_special_collapse(self, capsys):
        code, out, _ = run(["check-spq6", "--q-special", "1", "--format", "json"], capsys)
        assert code == 0

    def test_oracle_convergence(self, capsys):
        code, out, _ = run(["oracle-convergence", "--order", "1", "--max-exp", "2", "--format", "json"], capsys)
        assert code == 0
        assert all(s["pass"] for s in json.loads(out)["results"]["slopes"])


class TestOutput:
    def test_output_dir_default_name(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("QWEYL_OUTPUT_DIR", str(tmp_path))
        code, out, _ = run(["expand", "beta", "--format", "json"], capsys)
        assert code == 0 and out == ""
        assert json.loads((tmp_path / "expand.json").read_text())["command"] == "expand"

    def test_relative_output_joins_dir(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("QWEYL_OUTPUT_DIR", str(tmp_path))
        run(["expand", "beta", "--output", "sub/b.tex", "--format", "latex"], capsys)
        assert (tmp_path / "sub" / "b.tex").read_text().startswith("% command: expand")

    def test_absolute_output_ignores_dir(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("QWEYL_OUTPUT_DIR", str(tmp_path / "unused"))
        target = tmp_path / "b.txt"
        run(["expand", "beta", "--output", str(target)], capsys)
        assert target.exists() and not (tmp_path / "unused").exists()


def test_deterministic_across_processes():
    argv = [sys.executable, "-m", "qweyl", "derive", "bfield", "--order", "2", "--skip-oracle", "--format", "json"]
    env = {k: v for k, v in os.environ.items() if k != "QWEYL_OUTPUT_DIR"}
    runs = [subprocess.run(argv, capture_output=True, env=env | {"PYTHONHASHSEED": seed}, check=True).stdout
            for seed in ("1", "2")]
    assert runs[0] == runs[1]
