"""Integration tests for runs, the result store and report bundles."""

import numpy as np
import pytest

from ergavg.core.gridfn import GridFunction
from ergavg.lab.experiments import run_experiment
from ergavg.lab.report import load_report, write_report_bundle
from ergavg.lab.store import ResultStore
from ergavg.spectral.paraproduct import model_paraproduct, paraproduct_kernel_oracle
from ergavg.spectral.symbols import principal_arc_witness
from ergavg.types import ExperimentConfig, ExperimentKind


@pytest.fixture
def store(tmp_path):
    """Result store in a temporary directory."""
    with ResultStore(tmp_path / "results", map_size=16 * 1024 * 1024) as s:
        yield s


class TestLabWorkflow:
    """Integration tests for a run stored and reloaded."""

    def test_store_and_bundle_agree(self, store, tmp_path):
        """Test that the store and the bundle hand back the same report."""
        cfg = ExperimentConfig(
            kind=ExperimentKind.EXP_SUM_VARIATION,
            seed=5,
            parameters={
                "grid": 2,
                "random_pairs": 2,
                "cap_small": 64,
                "cap_large": 256,
                "oracle_scales": 6,
            },
        )
        report = run_experiment(cfg)
        store.put_report(report)
        write_report_bundle(report, tmp_path / "bundle")

        stored = store.get_report(ExperimentKind.EXP_SUM_VARIATION, 5)
        bundled = load_report(tmp_path / "bundle")
        for loaded in (stored, bundled):
            assert loaded.series == report.series
            assert loaded.passes == report.passes
            assert loaded.constants == report.constants

    def test_reruns_replace_reports(self, store):
        """Test that a rerun with the same seed overwrites the stored report."""
        cfg = ExperimentConfig(
            kind=ExperimentKind.MAXIMAL_RATIO,
            seed=2,
            parameters={"trials": 1, "support": 8, "cap_small": 8, "cap_large": 16},
        )
        store.put_report(run_experiment(cfg))
        store.put_report(run_experiment(cfg))
        assert store.list_reports() == ["reports/maximalRatio/2"]


@pytest.mark.slow
@pytest.mark.parametrize("kind", list(ExperimentKind))
def test_default_acceptance(kind):
    """Test that every experiment passes at its default parameters."""
    report = run_experiment(ExperimentConfig(kind=kind, seed=20240229), workers=2)
    failed = [name for name, flag in report.passes.items() if not flag]
    assert not failed, f"{kind.value} failed {failed}"


@pytest.mark.slow
def test_principal_arc_witnesses_scale_with_n():
    """Test that max ||xi|| N over witnesses is stable within a factor of 2."""
    reach = []
    for N in (2**8, 2**9, 2**10):
        witnesses = principal_arc_witness(N, 0.1, 1.0 / (4 * N))
        assert witnesses
        reach.append(max(w.xi_times_n for w in witnesses))
    assert max(reach) <= 2 * min(reach)


@pytest.mark.slow
@pytest.mark.parametrize("levels", [(-1, -1), (0, 1), (1, 0)])
def test_model_paraproduct_matches_oracle(levels):
    """Test the model paraproduct against kernel quadrature to 1e-6."""
    rng = np.random.default_rng(20240229)
    f = GridFunction(rng.uniform(-1, 1, 8) + 1j * rng.uniform(-1, 1, 8), -2)
    g = GridFunction(rng.uniform(-1, 1, 8), 3)
    l1, l2 = levels
    xs = np.arange(-6, 24, 3)
    model = model_paraproduct(f, g, 16, l1, l2, 1, panels=4096)
    oracle = paraproduct_kernel_oracle(f, g, 16, l1, l2, 1, xs)
    np.testing.assert_allclose(model.at(xs), oracle, rtol=0, atol=1e-6)
