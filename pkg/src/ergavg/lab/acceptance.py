"""Pass rules, evaluated from stored series and constants only.

Every experiment report is judged here, both when it is produced and when it
is loaded back, so a stored report can never carry a stale verdict.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ergavg.core.errors import DomainError
from ergavg.lab.fitting import fit_scaling, fit_semilog, positive_points
from ergavg.types import ExperimentKind, ExperimentReport, ScalingFit, Series

Fits = Dict[str, ScalingFit]
Passes = Dict[str, bool]
Rule = Callable[[Any, Dict[str, Series], Dict[str, float]], Tuple[Fits, Passes]]

IMPROVING_SERIES = ("ratio_delta", "ratio_rademacher", "ratio_indicator")
MINOR_ARC_CASES = ("case_i", "case_ii")
DENSITY_MATCH = 1e-12


def running_max_bounded(y: List[float], growth: float) -> bool:
    """Final running max is at most ``growth`` times the running max at the middle."""
    if not y:
        return True
    running = np.maximum.accumulate(np.asarray(y, dtype=np.float64))
    return bool(running[-1] <= growth * running[len(running) // 2])


def non_increasing(y: List[float], slack: float) -> bool:
    """``y[k+1] <= (1 + slack) y[k]`` for every k."""
    return all(b <= (1.0 + slack) * a for a, b in zip(y, y[1:]))


def stable_under_doubling(small: Series, large: Series, growth: float) -> bool:
    if not small.y or not large.y:
        return False
    return max(large.y) <= growth * max(small.y)


def _decays(
    series: Series, slack: float, max_slope: float
) -> Tuple[bool, Optional[ScalingFit]]:
    if not non_increasing(series.y, slack):
        return False, None
    points = positive_points(series)
    if len(points) < 3:
        return bool(series.y) and series.y[-1] == 0, None
    fit = fit_semilog(points)
    return fit.slope <= max_slope, fit


def _improving(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    fits: Fits = {}
    passes: Passes = {}
    for name in IMPROVING_SERIES:
        passes[f"bounded_{name}"] = running_max_bounded(
            series[name].y, params.growth_bound
        )
    passes["delta_exact"] = bool(max(series["multiplicity"].y, default=0.0) <= 2.0)
    lo, hi = 2.0**params.slope_k_min, 2.0**params.slope_k_max
    sup_points = positive_points(series["indicator_sup"])
    window = [(x, y) for x, y in sup_points if lo <= x <= hi]
    fits["indicator_sup"] = fit_scaling(window)
    passes["indicator_slope"] = (
        abs(fits["indicator_sup"].slope - params.slope_target) <= params.slope_tolerance
    )
    return fits, passes


def _minor_arc(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    fits: Fits = {}
    passes: Passes = {}
    for name in MINOR_ARC_CASES + ("control",):
        ok, fit = _decays(series[name], params.slack, params.max_slope)
        if fit is not None:
            fits[name] = fit
        if name == "control":
            passes["control_discriminates"] = not ok
        else:
            passes[f"decay_{name}"] = ok
    return fits, passes


def _jump_corollary(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    fits: Fits = {}
    points = positive_points(series["max_jumps"])
    if len(points) >= 3:
        fits["max_jumps"] = fit_scaling(points)
        slope_ok = fits["max_jumps"].slope <= params.max_slope
    else:
        slope_ok = True
    passes = {
        "jump_slope": slope_ok,
        "oracle_agrees": constants.get("oracle_dp") == constants.get("oracle_brute"),
        "slack_nonnegative": min(series["min_slack"].y, default=0.0) >= -1e-12,
    }
    return fits, passes


def _variational_ratio(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    passes = {
        "variation_stable": stable_under_doubling(
            series["variation_small"], series["variation_large"], params.max_growth
        ),
        "maximal_stable": stable_under_doubling(
            series["maximal_small"], series["maximal_large"], params.max_growth
        ),
    }
    return {}, passes


def _maximal_ratio(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    passes = {
        "maximal_stable": stable_under_doubling(
            series["maximal_small"], series["maximal_large"], params.max_growth
        )
    }
    return {}, passes


def _symbol_comparison(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    fit = fit_scaling(positive_points(series["sup_difference"]))
    passes = {
        "slope_window": params.slope_low <= fit.slope <= params.slope_high,
        "closed_form_oracle": constants.get("closed_form_max_error", np.inf)
        <= params.oracle_tolerance,
    }
    return {"sup_difference": fit}, passes


def _sharpness(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    deviation = series["deviation"]
    by_mu = dict(zip(deviation.x, deviation.y))
    within = True
    for mu in params.checked_mus:
        match = [d for m, d in by_mu.items() if abs(m - mu) <= DENSITY_MATCH]
        within = within and bool(match) and match[0] <= params.tolerance
    ordered = [by_mu[m] for m in sorted(by_mu)]
    monotone = all(b <= a + params.monotone_slack for a, b in zip(ordered, ordered[1:]))
    return {}, {"within_tolerance": within, "monotone_in_density": monotone}


def _exp_sum_variation(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    passes = {
        "variation_stable": stable_under_doubling(
            series["variation_small"], series["variation_large"], params.max_growth
        ),
        "oracle_agrees": constants.get("oracle_error", np.inf)
        <= params.oracle_tolerance,
        "origin_exact": abs(constants.get("origin_variation", np.nan) - 1.0) <= 1e-12,
    }
    return {}, passes


def _shifted_square(
    params: Any, series: Dict[str, Series], constants: Dict[str, float]
) -> Tuple[Fits, Passes]:
    points = positive_points(series["ratio"])
    fits: Fits = {}
    if len(points) >= 3:
        fits["ratio"] = fit_scaling(points)
        slope_ok = fits["ratio"].slope <= params.max_slope
    else:
        # two shift bounds: the slope between them
        (x0, y0), (x1, y1) = points[0], points[-1]
        slope_ok = np.log(y1 / y0) / np.log(x1 / x0) <= params.max_slope
    passes = {
        "growth_slope": bool(slope_ok),
        "single_scale_identity": constants.get("single_scale_error", np.inf)
        <= params.identity_tolerance,
    }
    return fits, passes


RULES: Dict[ExperimentKind, Rule] = {
    ExperimentKind.IMPROVING: _improving,
    ExperimentKind.MINOR_ARC: _minor_arc,
    ExperimentKind.JUMP_COROLLARY: _jump_corollary,
    ExperimentKind.VARIATIONAL_RATIO: _variational_ratio,
    ExperimentKind.MAXIMAL_RATIO: _maximal_ratio,
    ExperimentKind.SYMBOL_COMPARISON: _symbol_comparison,
    ExperimentKind.SHARPNESS: _sharpness,
    ExperimentKind.EXP_SUM_VARIATION: _exp_sum_variation,
    ExperimentKind.SHIFTED_SQUARE_PROBE: _shifted_square,
}


def evaluate(report: ExperimentReport) -> Tuple[Fits, Passes]:
    """Fits and pass flags implied by a report's series and constants."""
    rule = RULES[report.kind]
    try:
        fits, passes = rule(report.config.params, report.series, report.constants)
    except KeyError as exc:
        raise DomainError(f"{report.kind.value} report lacks series {exc}") from None
    return fits, {name: bool(flag) for name, flag in passes.items()}


def reevaluate(report: ExperimentReport) -> ExperimentReport:
    """Copy of ``report`` whose fits and pass flags are recomputed."""
    fits, passes = evaluate(report)
    return report.model_copy(update={"fits": fits, "passes": passes})
