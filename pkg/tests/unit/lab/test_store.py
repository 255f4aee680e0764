"""Tests for the LMDB result store."""

import pytest

from ergavg.lab.store import ResultStore, report_key
from ergavg.types import ExperimentConfig, ExperimentKind, ExperimentReport, Series


@pytest.fixture
def store(tmp_path):
    """Fresh store in a temporary directory."""
    with ResultStore(tmp_path / "results", map_size=8 * 1024 * 1024) as s:
        yield s


def make_report(seed, deviations=(0.2, 0.1)):
    """Small sharpness report."""
    cfg = ExperimentConfig(
        kind=ExperimentKind.SHARPNESS,
        seed=seed,
        parameters={"mus": [0.1, 0.2], "checked_mus": [0.1, 0.2]},
    )
    return ExperimentReport(
        config=cfg,
        series={"deviation": Series(x=[0.1, 0.2], y=list(deviations))},
        passes={"within_tolerance": True},
    )


class TestResultStore:
    """Test suite for ResultStore."""

    def test_set_get_delete(self, store):
        """Test the raw key-value operations."""
        store.set("a/1", {"x": [1, 2]})
        assert store.get("a/1") == {"x": [1, 2]}
        assert store.get("missing") is None
        assert store.delete("a/1")
        assert not store.delete("a/1")

    def test_keys_by_prefix(self, store):
        """Test prefix iteration in sorted order."""
        for key in ("b/2", "a/2", "a/1", "c"):
            store.set(key, 0)
        assert list(store.keys("a/")) == ["a/1", "a/2"]
        assert list(store.keys()) == ["a/1", "a/2", "b/2", "c"]
        assert list(store.keys("z")) == []

    def test_report_round_trip(self, store):
        """Test that stored reports come back re-judged."""
        key = store.put_report(make_report(5, deviations=(0.5, 0.1)))
        assert key == report_key(ExperimentKind.SHARPNESS, 5) == "reports/sharpness/5"
        loaded = store.get_report(ExperimentKind.SHARPNESS, 5)
        assert loaded.series["deviation"].y == [0.5, 0.1]
        assert loaded.passes["within_tolerance"] is False
        assert store.get_report(ExperimentKind.SHARPNESS, 6) is None

    def test_list_and_delete_reports(self, store):
        """Test listing by kind and deletion."""
        store.put_report(make_report(1))
        store.put_report(make_report(2))
        store.set("other", 1)
        assert store.list_reports() == ["reports/sharpness/1", "reports/sharpness/2"]
        assert store.list_reports(ExperimentKind.IMPROVING) == []
        assert store.delete_report(ExperimentKind.SHARPNESS, 1)
        assert store.list_reports(ExperimentKind.SHARPNESS) == ["reports/sharpness/2"]
