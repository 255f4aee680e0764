"""Experiment harness: seeded runs, acceptance rules, reports and storage."""

from .acceptance import evaluate, reevaluate
from .cyclic import CyclicSystem, fibonacci_pair
from .experiments import RUNNERS, run_experiment
from .fitting import fit_scaling, fit_semilog
from .report import load_report, report_from_json, write_report_bundle
from .runner import TrialRunner
from .store import ResultStore, report_key

__all__ = [
    "CyclicSystem",
    "fibonacci_pair",
    "TrialRunner",
    "RUNNERS",
    "run_experiment",
    "evaluate",
    "reevaluate",
    "fit_scaling",
    "fit_semilog",
    "write_report_bundle",
    "load_report",
    "report_from_json",
    "ResultStore",
    "report_key",
]
