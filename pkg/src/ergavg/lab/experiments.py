"""Desk-scale experiments.

Each ``run_*`` function takes an :class:`ExperimentConfig`, measures its
series and constants, and hands them to the acceptance rules. Randomness
comes only from generators seeded with ``seed ^ trial_index``.
"""

from __future__ import annotations

import math
import time
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import structlog

from ergavg.core.errors import DomainError
from ergavg.core.gridfn import GridFunction, lp_norm
from ergavg.core.sequences import LacunarySet, lacunary_set, max_multiplicity_profile
from ergavg.lab.acceptance import IMPROVING_SERIES, reevaluate
from ergavg.lab.cyclic import CyclicSystem
from ergavg.lab.inputs import (
    hann_taper,
    rademacher,
    random_walk_phase,
    torus_grid,
    torus_pairs,
    trial_rng,
)
from ergavg.lab.runner import TrialRunner
from ergavg.operators.averages import (
    average_family,
    linear_smoothing_average,
    maximal_average,
    upper_half_average,
)
from ergavg.operators.variation import (
    IndexedSequence,
    brute_force_jump_count,
    brute_force_variation,
    jump_count,
    jump_inequality_slack,
    sup_norms_batch,
    variation_norm,
    variation_norms_batch,
)
from ergavg.spectral.cutoffs import (
    CutoffKind,
    CutoffSpec,
    band_project,
    cutoff_kernel,
    kernel_radius,
)
from ergavg.spectral.paraproduct import shifted_square_function
from ergavg.spectral.symbols import (
    SymbolQuery,
    continuous_symbol,
    continuous_symbol_closed_form,
    discrete_symbol,
    exponential_partial_sums,
    symbol_difference,
)
from ergavg.spectral.transform import default_grid_size
from ergavg.types import (
    ExperimentConfig,
    ExperimentKind,
    ExperimentReport,
    ExpSumVariationParams,
    MaximalRatioParams,
    Series,
    ShiftedSquareProbeParams,
    VariationalRatioParams,
)

logger = structlog.get_logger(__name__)

GOLDEN_FRACTION = (1.0 + math.sqrt(5.0)) / 2.0 - 1.0
REFERENCE_PAIR = (0.5, 0.25 * GOLDEN_FRACTION)
RATIO_SERIES = ("variation_small", "variation_large", "maximal_small", "maximal_large")
KERNEL_PANELS = 128

Runner = Callable[[ExperimentConfig, Optional[TrialRunner]], ExperimentReport]


def _lp(values: np.ndarray, p: float) -> float:
    return lp_norm(GridFunction(np.asarray(values)), p)


def _finish(
    cfg: ExperimentConfig,
    started: float,
    series: Dict[str, Series],
    constants: Optional[Dict[str, float]] = None,
    informational: Optional[List[str]] = None,
) -> ExperimentReport:
    report = reevaluate(
        ExperimentReport(
            config=cfg,
            series=series,
            constants=constants or {},
            informational=informational or [],
            duration_seconds=time.perf_counter() - started,
        )
    )
    logger.info(
        "experiment_finished",
        kind=cfg.kind.value,
        seed=cfg.seed,
        duration=round(report.duration_seconds, 3),
        passed=report.passed,
        passes=report.passes,
    )
    return report


def _start(cfg: ExperimentConfig) -> float:
    logger.info("experiment_started", kind=cfg.kind.value, seed=cfg.seed)
    return time.perf_counter()


# improving estimate


def run_improving(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """``N^(1/p - 1/q) ||B_N f||_q / ||f||_p`` for three inputs, plus exact checks."""
    started = _start(cfg)
    params = cfg.params
    rng = trial_rng(cfg.seed, 0)
    inputs = dict(
        zip(
            IMPROVING_SERIES,
            (
                GridFunction.delta(0),
                rademacher(rng, params.support),
                GridFunction.indicator(0, params.support),
            ),
        )
    )
    q = math.inf if params.q is None else params.q
    scales = [2**k for k in range(params.k_min, params.k_max + 1)]
    series: Dict[str, Series] = {}
    for name, f in inputs.items():
        norm = lp_norm(f, params.p)
        ys = [
            N**params.gain * lp_norm(linear_smoothing_average(f, N), q) / norm
            for N in scales
        ]
        series[name] = Series(x=scales, y=ys)

    profile = max_multiplicity_profile(params.profile_max)
    powers = [2**k for k in range(1, params.profile_max.bit_length())]
    powers = [N for N in powers if N <= params.profile_max]
    series["multiplicity"] = Series(
        x=powers, y=[float(profile[N - 1]) for N in powers]
    )

    # N ||B_N delta_0||_inf is the largest multiplicity at N
    delta = GridFunction.delta(0)
    crosscheck = max(
        abs(N * lp_norm(linear_smoothing_average(delta, N), math.inf) - profile[N - 1])
        for N in powers
        if N <= 2**params.k_max
    )
    indicator = GridFunction.indicator(0, params.support)
    sup_scales = [2**k for k in range(params.slope_k_min, params.slope_k_max + 1)]
    series["indicator_sup"] = Series(
        x=sup_scales,
        y=[
            lp_norm(linear_smoothing_average(indicator, N), math.inf)
            for N in sup_scales
        ],
    )
    constants = {"multiplicity_crosscheck": float(crosscheck)}
    return _finish(cfg, started, series, constants)


# minor arcs


def _l1_ratio(f: GridFunction, g: GridFunction, N: int) -> float:
    denominator = lp_norm(f, 2) * lp_norm(g, 2)
    if denominator == 0:
        return 0.0
    return lp_norm(upper_half_average(f, g, N), 1) / denominator


def _minor_arc_trial(
    rng: np.random.Generator, index: int, N: int, levels: List[int]
) -> Dict[str, List[float]]:
    step = 0.5 / math.sqrt(N)

    def signal() -> GridFunction:
        return hann_taper(random_walk_phase(rng, N, step))

    f0, g0 = signal(), signal()
    M = default_grid_size(N)
    out: Dict[str, List[float]] = {"case_i": [], "case_ii": [], "control": []}
    for level in levels:
        high_f = CutoffSpec(scale=2.0**level / math.sqrt(N), kind=CutoffKind.HIGHPASS)
        high_g = CutoffSpec(scale=2.0**level / N, kind=CutoffKind.HIGHPASS)
        out["case_i"].append(_l1_ratio(band_project(f0, high_f, M), g0, N))
        out["case_ii"].append(_l1_ratio(f0, band_project(g0, high_g, M), N))
        out["control"].append(_l1_ratio(signal(), signal(), N))
    return out


def run_minor_arc(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """Decay of the upper-half average in the arc level when one input is high-passed.

    Case (i) removes ``|xi| <~ 2^l / sqrt N`` from f, case (ii) removes
    ``|xi| <~ 2^l / N`` from g. The control arm uses fresh unfiltered inputs.
    """
    started = _start(cfg)
    params = cfg.params
    runner = runner or TrialRunner()
    levels = list(range(params.l_min, params.l_max + 1))
    idx = range(len(levels))
    trials = runner.map(_minor_arc_trial, cfg.seed, params.trials, params.N, levels)
    series = {
        name: Series(
            x=levels,
            y=[float(np.mean([t[name][i] for t in trials])) for i in idx],
        )
        for name in ("case_i", "case_ii", "control")
    }
    return _finish(cfg, started, series, {"N": float(params.N)})


# jump counting for exponential sums


def run_jump_corollary(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """Largest jump count over random frequency pairs, as the jump size shrinks."""
    started = _start(cfg)
    params = cfg.params
    scales = lacunary_set(params.lam, 1, params.cap).as_array()
    pairs = torus_pairs(trial_rng(cfg.seed, 0), params.pairs)
    sums = exponential_partial_sums(pairs[:, 0], pairs[:, 1], scales)
    sequences = [IndexedSequence(scales, row) for row in sums]

    max_jumps, min_slack = [], []
    for delta in params.deltas:
        counts = [jump_count(seq, delta).count or 0 for seq in sequences]
        max_jumps.append(float(max(counts)))
        min_slack.append(
            float(min(jump_inequality_slack(seq, delta, params.r) for seq in sequences))
        )
    inverse = [1.0 / d for d in params.deltas]

    origin = IndexedSequence(scales, exponential_partial_sums(0.0, 0.0, scales)[0])
    reference = IndexedSequence(
        scales, exponential_partial_sums(*REFERENCE_PAIR, scales)[0]
    )
    constants = {
        "scales": float(scales.size),
        "zero_pair_jumps": float(jump_count(origin, params.deltas[-1]).count or 0),
        "oracle_dp": float(jump_count(reference, params.oracle_delta).count or 0),
        "oracle_brute": float(brute_force_jump_count(reference, params.oracle_delta)),
    }
    series = {
        "max_jumps": Series(x=inverse, y=max_jumps),
        "min_slack": Series(x=inverse, y=min_slack),
    }
    return _finish(cfg, started, series, constants, informational=["min_slack"])


# long variational inequality


def _variational_trial(
    rng: np.random.Generator, index: int, raw: Dict[str, Any]
) -> Optional[Dict[str, Any]]:
    params = VariationalRatioParams(**raw)
    f = rademacher(rng, params.support)
    g = rademacher(rng, params.support)
    denominator = lp_norm(f, params.p1) * lp_norm(g, params.p2)
    if denominator == 0:
        return None
    scales = lacunary_set(params.lam, params.n_min, params.cap_large).as_array()
    _, table = average_family(f, g, scales)
    rows = table.T
    small = scales <= params.cap_small
    p = params.p
    head = rows[:, small]
    return {
        "variation_small": _lp(variation_norms_batch(head, params.r), p) / denominator,
        "variation_large": _lp(variation_norms_batch(rows, params.r), p) / denominator,
        "maximal_small": _lp(sup_norms_batch(head), p) / denominator,
        "maximal_large": _lp(sup_norms_batch(rows), p) / denominator,
        "holder": [_lp(row, p) / denominator for row in table],
        "r_probe": [
            _lp(variation_norms_batch(rows, r), p) / denominator
            for r in params.probe_exponents
        ],
    }


def run_variational_ratio(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """``||V^r(A~_N(f, g))||_p / (||f||_p1 ||g||_p2)`` as the scale cap doubles."""
    started = _start(cfg)
    params = cfg.params
    runner = runner or TrialRunner()
    results = runner.map(
        _variational_trial, cfg.seed, params.trials, params.model_dump()
    )
    kept = [(i, r) for i, r in enumerate(results) if r is not None]
    scales = lacunary_set(params.lam, params.n_min, params.cap_large).scales
    series = {
        name: Series(x=[i for i, _ in kept], y=[r[name] for _, r in kept])
        for name in RATIO_SERIES
    }
    series["holder"] = Series(
        x=scales, y=[max(r["holder"][j] for _, r in kept) for j in range(len(scales))]
    )
    series["r_probe"] = Series(
        x=params.probe_exponents,
        y=[
            max(r["r_probe"][j] for _, r in kept)
            for j in range(len(params.probe_exponents))
        ],
    )
    constants = {"trials_kept": float(len(kept)), "p": params.p}
    return _finish(cfg, started, series, constants, informational=["holder", "r_probe"])


# maximal inequality over every N


def _maximal_trial(
    rng: np.random.Generator, index: int, raw: Dict[str, Any]
) -> Dict[str, float]:
    params = MaximalRatioParams(**raw)
    f = rademacher(rng, params.support)
    g = rademacher(rng, params.support)
    denominator = lp_norm(f, params.p1) * lp_norm(g, params.p2)
    return {
        name: lp_norm(maximal_average(f, g, cap), params.p) / denominator
        for name, cap in (
            ("maximal_small", params.cap_small),
            ("maximal_large", params.cap_large),
        )
    }


def run_maximal_ratio(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """``||sup_{N <= cap} |A_N(f, g)| ||_p`` ratio as the cap doubles."""
    started = _start(cfg)
    params = cfg.params
    runner = runner or TrialRunner()
    results = runner.map(_maximal_trial, cfg.seed, params.trials, params.model_dump())
    trials = list(range(len(results)))
    series = {
        name: Series(x=trials, y=[r[name] for r in results])
        for name in ("maximal_small", "maximal_large")
    }
    return _finish(cfg, started, series, {"p": params.p})


# discrete against continuous symbol


def run_symbol_comparison(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """``sup |m_Z - m_R|`` on the principal arc against N, with a closed-form check."""
    started = _start(cfg)
    params = cfg.params
    scales = [2**k for k in range(params.k_min, params.k_max + 1)]
    diffs, origin = [], 0.0
    for N in scales:
        l1, l2 = params.arc_levels(N)
        diffs.append(symbol_difference(N, l1, l2, params.points))
        at_origin = abs(discrete_symbol(SymbolQuery(xi1=0.0, xi2=0.0, N=N)) - 0.5)
        origin = max(origin, N * at_origin)

    rng = trial_rng(cfg.seed, 0)
    worst = 0.0
    for _ in range(params.oracle_draws):
        N = 2 ** int(rng.integers(1, params.oracle_max_exponent + 1))
        xi2 = float(rng.random() - 0.5)
        exact = continuous_symbol_closed_form(xi2, N)
        worst = max(worst, abs(continuous_symbol(0.0, xi2, N) - exact))

    l1, l2 = params.arc_levels(scales[0])
    constants = {
        "l1": float(l1),
        "l2": float(l2),
        "origin_scaled_difference": origin,
        "closed_form_max_error": worst,
    }
    series = {"sup_difference": Series(x=scales, y=diffs)}
    return _finish(cfg, started, series, constants)


# sharpness on a rotation


def run_sharpness(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """Mean of ``A_{Q^2}(1_A, 1_A)`` on ``Z/QZ`` against ``mu(A)^2``."""
    started = _start(cfg)
    params = cfg.params
    system = CyclicSystem.fibonacci(params.fibonacci_index)
    Q = system.Q
    N = Q * Q
    mus = sorted(params.mus)
    means, squares, deviations = [], [], []
    for mu in mus:
        size = max(1, math.floor(mu * Q))
        indicator = system.interval(size)
        mean = system.mean_average(indicator, indicator, N)
        target = (size / Q) ** 2
        means.append(mean)
        squares.append(target)
        deviations.append(abs(mean - target) / target)
    ones = np.ones(Q)
    series = {
        "mean_average": Series(x=mus, y=means),
        "mu_squared": Series(x=mus, y=squares),
        "deviation": Series(x=mus, y=deviations),
    }
    informational = []
    for p in params.exponents:
        name = f"p_{p:g}"
        series[name] = Series(x=mus, y=[mu ** (2.0 - 1.0 / p) for mu in mus])
        informational.append(name)
    constants = {
        "Q": float(Q),
        "a": float(system.a),
        "whole_space_mean": system.mean_average(ones, ones, N),
    }
    return _finish(cfg, started, series, constants, informational)


# variation of exponential sums


def run_exp_sum_variation(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """Largest ``V^r`` of exponential partial sums over a grid and random pairs."""
    started = _start(cfg)
    params: ExpSumVariationParams = cfg.params
    rng = trial_rng(cfg.seed, 0)
    pairs = np.vstack((torus_grid(params.grid), torus_pairs(rng, params.random_pairs)))
    scales = lacunary_set(params.lam, 1, params.cap_large).as_array()
    small = scales <= params.cap_small
    sums = exponential_partial_sums(pairs[:, 0], pairs[:, 1], scales)
    index = list(range(len(pairs)))
    series = {
        name: Series(x=index, y=variation_norms_batch(block, params.r).tolist())
        for name, block in (
            ("variation_small", sums[:, small]),
            ("variation_large", sums),
        )
    }

    origin = IndexedSequence(scales, exponential_partial_sums(0.0, 0.0, scales)[0])
    head = scales[: params.oracle_scales]
    reference = IndexedSequence(
        head, exponential_partial_sums(*REFERENCE_PAIR, head)[0]
    )
    exact = brute_force_variation(reference, params.r)
    found = variation_norm(reference, params.r).value
    constants = {
        "pairs": float(len(pairs)),
        "origin_variation": variation_norm(origin, params.r).value,
        "oracle_error": abs(found - exact) / max(1.0, exact),
    }
    return _finish(cfg, started, series, constants)


# shifted square function


def _single_scale_error(f: GridFunction, eta: CutoffSpec, N: int) -> float:
    """Deviation of a one-scale square function from a direct spatial convolution.

    With the shift ``lambda_N = 1`` the square function is
    ``|k_N * f|(x - N)`` where ``k_N(y) = eta_check(y / N) / N`` is the
    real-line kernel sampled on the integers.
    """
    scales = LacunarySet(lambda_=2.0, scales=[N])
    square = shifted_square_function(f, scales, eta, 1.0, 1.0, {N: 1.0}, M=1 << 16)
    reach = math.ceil(1.5 * N * kernel_radius(eta))
    taps = np.arange(-reach, reach + 1) / N
    kernel = cutoff_kernel(eta, taps, panels=KERNEL_PANELS) / N
    direct = np.abs(np.convolve(f.values, kernel))
    lo = f.start - reach + N
    return float(np.max(np.abs(square.window(lo, lo + direct.size) - direct)))


def _shifted_square_trial(
    rng: np.random.Generator, index: int, raw: Dict[str, Any]
) -> List[float]:
    params = ShiftedSquareProbeParams(**raw)
    scales = lacunary_set(params.lam, 1, params.scale_max)
    eta = CutoffSpec(scale=params.eta_scale, kind=CutoffKind.BAND)
    f = rademacher(rng, params.support)
    norm = lp_norm(f, 2)
    ratios = []
    for K in params.ks:
        shifts = dict(zip(scales.scales, K * rng.uniform(-1.0, 1.0, len(scales))))
        square = shifted_square_function(f, scales, eta, params.A, params.d, shifts)
        ratios.append(lp_norm(square, 2) / norm)
    return ratios


def run_shifted_square_probe(
    cfg: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> ExperimentReport:
    """l^2 ratio of the shifted square function against the shift bound K."""
    started = _start(cfg)
    params = cfg.params
    runner = runner or TrialRunner()
    results = runner.map(
        _shifted_square_trial, cfg.seed, params.trials, params.model_dump()
    )
    series = {
        "ratio": Series(
            x=params.ks, y=[max(r[j] for r in results) for j in range(len(params.ks))]
        )
    }
    f = rademacher(trial_rng(cfg.seed, params.trials), params.support)
    eta = CutoffSpec(scale=params.eta_scale, kind=CutoffKind.BAND)
    constants = {"single_scale_error": _single_scale_error(f, eta, 8)}
    return _finish(cfg, started, series, constants)


RUNNERS: Dict[ExperimentKind, Runner] = {
    ExperimentKind.IMPROVING: run_improving,
    ExperimentKind.MINOR_ARC: run_minor_arc,
    ExperimentKind.JUMP_COROLLARY: run_jump_corollary,
    ExperimentKind.VARIATIONAL_RATIO: run_variational_ratio,
    ExperimentKind.MAXIMAL_RATIO: run_maximal_ratio,
    ExperimentKind.SYMBOL_COMPARISON: run_symbol_comparison,
    ExperimentKind.SHARPNESS: run_sharpness,
    ExperimentKind.EXP_SUM_VARIATION: run_exp_sum_variation,
    ExperimentKind.SHIFTED_SQUARE_PROBE: run_shifted_square_probe,
}


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Dispatch on the configured kind."""
    try:
        runner_fn = RUNNERS[cfg.kind]
    except KeyError:
        raise DomainError(f"unknown experiment kind {cfg.kind}") from None
    return runner_fn(cfg, TrialRunner(workers))
