"""Seeded trial execution, in-process or on a worker pool."""

from __future__ import annotations

from multiprocessing import Pool
from typing import Any, Callable, List, Sequence, Tuple

import structlog

from ergavg.lab.inputs import trial_rng

logger = structlog.get_logger(__name__)

Trial = Callable[..., Any]
_Task = Tuple[Trial, int, int, Tuple[Any, ...]]


def _run_trial(task: _Task) -> Any:
    fn, seed, index, args = task
    return fn(trial_rng(seed, index), index, *args)


class TrialRunner:
    """Run ``fn(rng, index, *args)`` for every trial index.

    Trial ``i`` always receives ``default_rng(seed ^ i)`` and results come
    back ordered by index, so the outcome does not depend on ``workers``.
    """

    def __init__(self, workers: int = 1):
        """Initialize the runner.

        Args:
            workers: Worker processes; 1 runs every trial in-process

        """
        self.workers = max(int(workers), 1)

    def map(self, fn: Trial, seed: int, count: int, *args: Any) -> List[Any]:
        """Run ``count`` trials of a module-level function.

        Args:
            fn: Trial function taking ``(rng, index, *args)``
            seed: Experiment seed
            count: Number of trials
            *args: Extra arguments passed to every trial

        Returns:
            Trial results in index order

        """
        tasks: Sequence[_Task] = [(fn, seed, i, tuple(args)) for i in range(count)]
        name = getattr(fn, "__name__", "trial")
        logger.debug("trials_dispatched", trial=name, count=count, workers=self.workers)
        if self.workers == 1 or count <= 1:
            return [_run_trial(task) for task in tasks]
        with Pool(processes=min(self.workers, count)) as pool:
            return pool.map(_run_trial, tasks)
