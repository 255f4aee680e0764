"""Tests for report bundles."""

import csv

import pytest

from ergavg.core.errors import StorageError
from ergavg.lab.report import load_report, report_from_json, write_report_bundle
from ergavg.types import ExperimentConfig, ExperimentKind, ExperimentReport, Series


@pytest.fixture
def report():
    """Symbol comparison report with a clean power law."""
    cfg = ExperimentConfig(kind=ExperimentKind.SYMBOL_COMPARISON, seed=3)
    xs = [256.0, 1024.0, 4096.0]
    return ExperimentReport(
        config=cfg,
        series={"sup_difference": Series(x=xs, y=[2 * x**-0.5 for x in xs])},
        constants={"closed_form_max_error": 0.0},
    )


def test_bundle_files(report, tmp_path):
    """Test that the bundle holds the report, the points and the plot."""
    paths = write_report_bundle(report, tmp_path / "bundle")
    assert set(paths) == {"report", "points", "plot"}
    assert all(p.exists() for p in paths.values())
    with open(paths["points"]) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["series", "x", "y"]
    assert len(rows) == 4
    assert rows[1][0] == "sup_difference"
    assert paths["plot"].read_text().lstrip().startswith("<?xml")


def test_load_recomputes_verdict(report, tmp_path):
    """Test that loading a bundle re-derives fits and flags."""
    write_report_bundle(report, tmp_path)
    loaded = load_report(tmp_path)
    assert loaded.passed
    assert loaded.fits["sup_difference"].slope == pytest.approx(-0.5)
    assert loaded.config.seed == 3


def test_report_from_json_ignores_stored_flags(report):
    """Test that a tampered verdict is overwritten."""
    tampered = report.model_copy(update={"passes": {"slope_window": False}})
    assert report_from_json(tampered.to_json()).passed


def test_missing_report(tmp_path):
    """Test that an absent report raises a storage error."""
    with pytest.raises(StorageError):
        load_report(tmp_path / "nowhere")
