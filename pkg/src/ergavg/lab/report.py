"""Report bundles: JSON, CSV points and an SVG plot."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import structlog  # noqa: E402

from ergavg.core.errors import StorageError  # noqa: E402
from ergavg.lab.acceptance import reevaluate  # noqa: E402
from ergavg.types import ExperimentReport  # noqa: E402

logger = structlog.get_logger(__name__)

REPORT_FILE = "report.json"
POINTS_FILE = "points.csv"
PLOT_FILE = "plot.svg"


def report_from_json(text: str) -> ExperimentReport:
    """Parse a report and recompute its fits and pass flags from the points."""
    return reevaluate(ExperimentReport.from_json(text))


def load_report(path: Path) -> ExperimentReport:
    """Load ``report.json`` from a file or a bundle directory."""
    path = Path(path)
    if path.is_dir():
        path = path / REPORT_FILE
    try:
        text = path.read_text()
    except OSError as exc:
        raise StorageError(f"cannot read report {path}: {exc}") from exc
    return report_from_json(text)


def write_points_csv(report: ExperimentReport, path: Path) -> None:
    """One line per point with header ``series,x,y``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "x", "y"])
        for name, series in report.series.items():
            for x, y in zip(series.x, series.y):
                writer.writerow([name, repr(float(x)), repr(float(y))])


def write_plot(report: ExperimentReport, path: Path) -> None:
    """Scatter of every series with its fitted line, log-log where the data allow."""
    fig, ax = plt.subplots(figsize=(7, 5))
    log_x = True
    for name, series in report.series.items():
        x = np.asarray(series.x, dtype=np.float64)
        y = np.asarray(series.y, dtype=np.float64)
        keep = y > 0
        if not keep.any():
            continue
        log_x = log_x and bool(np.all(x[keep] > 0))
        (marks,) = ax.plot(x[keep], y[keep], "o", ms=4, label=name)
        fit = report.fits.get(name)
        if fit is None:
            continue
        grid = np.linspace(x[keep].min(), x[keep].max(), 64)
        if fit.semilog:
            line = np.exp(fit.intercept + fit.slope * grid)
        else:
            line = np.exp(fit.intercept) * grid**fit.slope
        ax.plot(grid, line, "-", color=marks.get_color(), lw=1, label=f"{name} fit")
    if ax.lines:
        ax.set_yscale("log")
        if log_x:
            ax.set_xscale("log")
        ax.legend(fontsize="small")
    verdict = "pass" if report.passed else "fail"
    ax.set_title(f"{report.kind.value} seed={report.config.seed} ({verdict})")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def write_report_bundle(report: ExperimentReport, out_dir: Path) -> Dict[str, Path]:
    """Write ``report.json``, ``points.csv`` and ``plot.svg`` into ``out_dir``.

    Returns:
        Paths of the written files, keyed ``report``, ``points`` and ``plot``

    """
    out_dir = Path(out_dir)
    paths = {
        "report": out_dir / REPORT_FILE,
        "points": out_dir / POINTS_FILE,
        "plot": out_dir / PLOT_FILE,
    }
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths["report"].write_text(report.to_json())
        write_points_csv(report, paths["points"])
        write_plot(report, paths["plot"])
    except OSError as exc:
        raise StorageError(f"cannot write bundle to {out_dir}: {exc}") from exc
    logger.info("bundle_written", kind=report.kind.value, out_dir=str(out_dir))
    return paths
