"""Tests for the experiment runners at small sizes."""

import pytest

from ergavg.core.gridfn import GridFunction
from ergavg.lab.experiments import RUNNERS, _single_scale_error, run_experiment
from ergavg.spectral.cutoffs import CutoffKind, CutoffSpec
from ergavg.types import ExperimentConfig, ExperimentKind

SMALL = {
    ExperimentKind.IMPROVING: {
        "k_min": 2,
        "k_max": 8,
        "slope_k_min": 4,
        "slope_k_max": 8,
        "support": 8,
        "profile_max": 2**10,
    },
    ExperimentKind.MINOR_ARC: {"N": 64, "l_min": 0, "l_max": 2, "trials": 1},
    ExperimentKind.JUMP_COROLLARY: {"pairs": 5, "cap": 2**10},
    ExperimentKind.VARIATIONAL_RATIO: {
        "trials": 2,
        "support": 16,
        "cap_small": 64,
        "cap_large": 128,
    },
    ExperimentKind.MAXIMAL_RATIO: {
        "trials": 2,
        "support": 8,
        "cap_small": 16,
        "cap_large": 32,
    },
    ExperimentKind.SYMBOL_COMPARISON: {
        "k_min": 4,
        "k_max": 6,
        "points": 3,
        "oracle_draws": 5,
        "oracle_max_exponent": 4,
    },
    ExperimentKind.SHARPNESS: {},
    ExperimentKind.EXP_SUM_VARIATION: {
        "grid": 2,
        "random_pairs": 3,
        "cap_small": 2**6,
        "cap_large": 2**8,
        "oracle_scales": 6,
    },
    ExperimentKind.SHIFTED_SQUARE_PROBE: {
        "ks": [1, 4],
        "support": 16,
        "scale_max": 64,
        "trials": 1,
    },
}


def small_config(kind, seed=20240229):
    """Config of the given kind with desk-test sizes."""
    return ExperimentConfig(kind=kind, seed=seed, parameters=SMALL[kind])


def test_every_kind_has_a_runner():
    """Test that dispatch covers every kind."""
    assert set(RUNNERS) == set(ExperimentKind)


@pytest.mark.parametrize("kind", list(ExperimentKind))
def test_runs_produce_judged_reports(kind):
    """Test that every kind runs and carries its verdict."""
    report = run_experiment(small_config(kind))
    assert report.kind is kind
    assert report.series
    assert report.passes
    assert report.duration_seconds >= 0
    for series in report.series.values():
        assert len(series.x) == len(series.y)


@pytest.mark.parametrize(
    "kind", [ExperimentKind.MAXIMAL_RATIO, ExperimentKind.JUMP_COROLLARY]
)
def test_same_seed_same_series(kind):
    """Test that a run is determined by its seed."""
    first = run_experiment(small_config(kind, seed=9))
    second = run_experiment(small_config(kind, seed=9))
    assert first.series == second.series
    other = run_experiment(small_config(kind, seed=10))
    assert other.series != first.series


def test_workers_do_not_change_series():
    """Test that a worker pool gives the in-process series."""
    cfg = small_config(ExperimentKind.MAXIMAL_RATIO)
    assert run_experiment(cfg, workers=2).series == run_experiment(cfg).series


def test_improving_exact_checks():
    """Test the multiplicity bound and its cross-check against B_N."""
    report = run_experiment(small_config(ExperimentKind.IMPROVING))
    assert report.passes["delta_exact"]
    assert report.constants["multiplicity_crosscheck"] == pytest.approx(0, abs=1e-9)
    assert max(report.series["multiplicity"].y) == 2.0


def test_jump_corollary_oracles():
    """Test the dynamic program against brute force and the jump inequality."""
    report = run_experiment(small_config(ExperimentKind.JUMP_COROLLARY))
    assert report.passes["oracle_agrees"]
    assert report.passes["slack_nonnegative"]
    assert report.constants["scales"] == 10


def test_exp_sum_variation_exact_checks():
    """Test the origin and the brute-force oracle."""
    report = run_experiment(small_config(ExperimentKind.EXP_SUM_VARIATION))
    assert report.passes["origin_exact"]
    assert report.passes["oracle_agrees"]
    assert report.constants["pairs"] == 7


def test_symbol_comparison_closed_form():
    """Test the closed-form oracle at small N."""
    report = run_experiment(small_config(ExperimentKind.SYMBOL_COMPARISON))
    assert report.passes["closed_form_oracle"]
    assert report.constants["origin_scaled_difference"] == pytest.approx(0, abs=1e-9)


def test_sharpness_whole_space():
    """Test that the constant function averages to one."""
    report = run_experiment(small_config(ExperimentKind.SHARPNESS))
    assert report.constants["whole_space_mean"] == pytest.approx(1.0)
    assert report.constants["Q"] == 987
    assert report.informational == ["p_0.4", "p_0.5", "p_0.6"]


def test_shifted_square_identity():
    """Test the single-scale identity."""
    report = run_experiment(small_config(ExperimentKind.SHIFTED_SQUARE_PROBE))
    assert report.passes["single_scale_identity"]
    assert report.series["ratio"].x == [1, 4]


def test_single_scale_error_against_convolution():
    """Test the square function at one scale against a direct kernel convolution."""
    eta = CutoffSpec(scale=0.25, kind=CutoffKind.BAND)
    for f in (GridFunction.delta(3), GridFunction([1.0, -1.0, 1.0, 1.0], -2)):
        assert _single_scale_error(f, eta, 8) <= 1e-10
