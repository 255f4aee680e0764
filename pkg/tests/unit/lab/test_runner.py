"""Tests for the trial runner."""

from ergavg.lab.runner import TrialRunner


def draw(rng, index, scale):
    """Trial returning its index and one scaled draw."""
    return index, scale * float(rng.random())


class TestTrialRunner:
    """Test suite for TrialRunner."""

    def test_results_in_index_order(self):
        """Test that results come back ordered by trial index."""
        results = TrialRunner().map(draw, 11, 5, 2.0)
        assert [i for i, _ in results] == [0, 1, 2, 3, 4]

    def test_workers_do_not_change_results(self):
        """Test that a worker pool reproduces the in-process results."""
        serial = TrialRunner(workers=1).map(draw, 11, 6, 1.0)
        pooled = TrialRunner(workers=2).map(draw, 11, 6, 1.0)
        assert serial == pooled

    def test_seed_changes_results(self):
        """Test that different seeds give different draws."""
        a = TrialRunner().map(draw, 1, 3, 1.0)
        b = TrialRunner().map(draw, 2, 3, 1.0)
        assert a != b

    def test_worker_floor(self):
        """Test that nonpositive worker counts run in-process."""
        assert TrialRunner(workers=0).workers == 1
