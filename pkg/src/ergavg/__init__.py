"""ergavg - bilinear averages along (floor(sqrt n), n).

A desk-scale laboratory for the bilinear averages
``(1/N) sum_{n <= N} f(x - floor(sqrt n)) g(x - n)`` on the integers: the
operators, their variation and maximal norms, the discrete and continuous
symbols, Gowers norms, and seeded experiments with pass/fail reports.
"""

__version__ = "0.1.0"

from ergavg.config import Config, load_experiment_config
from ergavg.core import (
    DomainError,
    ErgavgError,
    GridFunction,
    LacunarySet,
    lacunary_set,
    lp_norm,
)
from ergavg.lab import ResultStore, TrialRunner, run_experiment, write_report_bundle
from ergavg.operators import (
    IndexedSequence,
    bilinear_average,
    gowers_norm,
    jump_count,
    upper_half_average,
    variation_norm,
)
from ergavg.types import ExperimentConfig, ExperimentKind, ExperimentReport

__all__ = [
    "Config",
    "load_experiment_config",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentReport",
    "GridFunction",
    "LacunarySet",
    "lacunary_set",
    "lp_norm",
    "bilinear_average",
    "upper_half_average",
    "IndexedSequence",
    "variation_norm",
    "jump_count",
    "gowers_norm",
    "run_experiment",
    "TrialRunner",
    "ResultStore",
    "write_report_bundle",
    "ErgavgError",
    "DomainError",
]
