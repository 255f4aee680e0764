"""Tests for CLI commands."""

import json

import pytest
from typer.testing import CliRunner

from ergavg.cli.commands import app
from ergavg.config import Config
from ergavg.core.gridfn import GridFunction
from ergavg.lab.report import write_report_bundle
from ergavg.operators.averages import bilinear_average
from ergavg.types import ExperimentConfig, ExperimentKind, ExperimentReport, Series

runner = CliRunner()


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    """Temporary working directory with settings pointing into it."""
    monkeypatch.chdir(tmp_path)
    Config(
        results_path=tmp_path / "results", output_dir=tmp_path / "out"
    ).save_to_file(tmp_path / "ergavg.toml")
    return tmp_path


@pytest.fixture
def inputs(workspace):
    """Two GridFunction JSON files."""
    f = GridFunction([1.0, -2.0, 0.5j], offset=-1)
    g = GridFunction([0.25, 1.0, 1.0, -1.0], offset=2)
    (workspace / "f.json").write_text(f.to_json())
    (workspace / "g.json").write_text(g.to_json())
    return f, g


def test_version_command() -> None:
    """Test version command output."""
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert "ergavg v" in result.stdout


def test_avg_writes_result(workspace, inputs) -> None:
    """Test the bilinear average written as JSON."""
    f, g = inputs
    result = runner.invoke(
        app, ["avg", "bilinear", "f.json", "g.json", "--n", "5", "--out", "avg"]
    )
    assert result.exit_code == 0
    assert "bilinear average" in result.stdout
    written = GridFunction.from_json((workspace / "avg" / "average.json").read_text())
    assert written.allclose(bilinear_average(f, g, 5))


def test_avg_argument_errors(workspace, inputs) -> None:
    """Test operators given the wrong number of inputs."""
    result = runner.invoke(app, ["avg", "smoothing", "f.json", "g.json", "--n", "3"])
    assert result.exit_code == 1
    assert "Error" in result.stdout
    result = runner.invoke(app, ["avg", "dual-star", "f.json", "--n", "3"])
    assert result.exit_code == 1


def test_variation_command(workspace) -> None:
    """Test variation with a jump count."""
    result = runner.invoke(app, ["variation", "0,1,0,1", "--delta", "0.5"])
    assert result.exit_code == 0
    assert "V^r" in result.stdout
    assert "N_delta" in result.stdout


def test_variation_rejects_bad_times(workspace) -> None:
    """Test that non-increasing times fail cleanly."""
    result = runner.invoke(app, ["variation", "1,2", "--times", "3,1"])
    assert result.exit_code == 1


def test_expsum_writes_csv(workspace) -> None:
    """Test the partial sums export."""
    result = runner.invoke(app, ["expsum", "--n-max", "100", "--out", "sums"])
    assert result.exit_code == 0
    lines = (workspace / "sums" / "expsum.csv").read_text().splitlines()
    assert lines[0] == "N,re,im"
    assert [line.split(",")[0] for line in lines[1:]] == [
        "1", "3", "7", "15", "31", "63"
    ]


def test_gowers_command(workspace, inputs) -> None:
    """Test the Gowers norm table."""
    result = runner.invoke(app, ["gowers", "g.json", "--order", "3"])
    assert result.exit_code == 0
    assert "U^3" in result.stdout
    assert "witness" in result.stdout


def test_report_empty_store(workspace) -> None:
    """Test report listing with nothing stored."""
    result = runner.invoke(app, ["report"])
    assert result.exit_code == 0
    assert "No stored reports" in result.stdout


def test_report_from_bundle(workspace) -> None:
    """Test showing a report from a bundle directory."""
    cfg = ExperimentConfig(kind=ExperimentKind.MAXIMAL_RATIO, seed=4)
    report = ExperimentReport(
        config=cfg,
        series={
            "maximal_small": Series(x=[0, 1], y=[1.0, 1.2]),
            "maximal_large": Series(x=[0, 1], y=[1.1, 1.3]),
        },
    )
    write_report_bundle(report, workspace / "bundle")
    result = runner.invoke(app, ["report", "--file", "bundle"])
    assert result.exit_code == 0
    assert "maximal_stable" in result.stdout
    assert "pass" in result.stdout


def test_verify_writes_bundle(workspace) -> None:
    """Test verify with a small experiment config."""
    config = workspace / "run.json"
    config.write_text(
        json.dumps(
            {
                "kind": "maximalRatio",
                "seed": 9,
                "parameters": {
                    "trials": 2,
                    "support": 8,
                    "cap_small": 16,
                    "cap_large": 32,
                },
            }
        )
    )
    result = runner.invoke(
        app, ["verify", "maximalRatio", "--config", str(config), "--out", "bundles"]
    )
    assert result.exit_code in (0, 1)
    assert (workspace / "bundles" / "maximalRatio" / "9" / "report.json").exists()
    assert "maximal_stable" in result.stdout


def test_verify_kind_mismatch(workspace) -> None:
    """Test that a config for another kind is refused."""
    config = workspace / "run.json"
    config.write_text(json.dumps({"kind": "sharpness", "seed": 1}))
    result = runner.invoke(app, ["verify", "improving", "--config", str(config)])
    assert result.exit_code == 1
    assert "Error" in result.stdout


def test_sweep_uses_config(workspace) -> None:
    """Test that sweep runs a configured kind with the config's parameters."""
    config = workspace / "small.json"
    config.write_text(
        json.dumps(
            {
                "kind": "maximalRatio",
                "seed": 11,
                "parameters": {
                    "trials": 2,
                    "support": 8,
                    "cap_small": 16,
                    "cap_large": 32,
                },
            }
        )
    )
    result = runner.invoke(
        app, ["sweep", "maximalRatio", "--config", str(config), "--out", "bundles"]
    )
    assert result.exit_code in (0, 1)
    assert "Sweep Summary" in result.stdout
    assert (workspace / "bundles" / "maximalRatio" / "11" / "report.json").exists()


def test_sweep_rejects_duplicate_configs(workspace) -> None:
    """Test that two configs for one kind are refused."""
    (workspace / "a.json").write_text(json.dumps({"kind": "sharpness", "seed": 1}))
    (workspace / "b.json").write_text(json.dumps({"kind": "sharpness", "seed": 2}))
    result = runner.invoke(
        app, ["sweep", "sharpness", "--config", "a.json", "--config", "b.json"]
    )
    assert result.exit_code == 1
    assert "both configure sharpness" in result.stdout
