"""ergavg CLI commands."""

import csv
import math
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import typer
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from ergavg.config import Config, load_experiment_config
from ergavg.core.errors import DomainError, error_handler
from ergavg.core.gridfn import GridFunction, lp_norm
from ergavg.core.sequences import lacunary_set
from ergavg.lab.experiments import run_experiment
from ergavg.lab.report import load_report, write_report_bundle
from ergavg.lab.store import ResultStore
from ergavg.operators.averages import (
    bilinear_average,
    dual_star,
    dual_star_star,
    linear_smoothing_average,
    upper_half_average,
)
from ergavg.operators.gowers import gowers_norm, u2_witness
from ergavg.operators.variation import (
    IndexedSequence,
    jump_count,
    jump_inequality_slack,
    variation_norm,
)
from ergavg.spectral.symbols import exponential_partial_sums
from ergavg.spectral.transform import next_pow2
from ergavg.types import ExperimentConfig, ExperimentKind, ExperimentReport
from ergavg.utils import (
    parse_complex_numbers,
    parse_numbers,
    read_grid_function,
    setup_logging,
)

app = typer.Typer(
    name="ergavg",
    help="ergavg - bilinear averages along (floor(sqrt n), n) on the integers",
    no_args_is_help=True,
)

# Global console for rich output
console = Console()

# Lab settings, replaced by the callback on every invocation
_settings: Config = Config.get_default()


class AverageOperator(str, Enum):
    """Averaging operators the ``avg`` command can evaluate."""

    BILINEAR = "bilinear"
    UPPER_HALF = "upper-half"
    SMOOTHING = "smoothing"
    DUAL_STAR = "dual-star"
    DUAL_STAR_STAR = "dual-star-star"


# Option defaults
SETTINGS_OPTION = typer.Option(
    Path("ergavg.toml"), "--settings", help="Lab settings TOML file"
)
DEBUG_OPTION = typer.Option(False, "--debug", help="Human-readable debug logging")
CONFIG_OPTION = typer.Option(
    None, "--config", "-c", help="Experiment config (.toml or .json)"
)
SEED_OPTION = typer.Option(None, "--seed", help="Experiment seed (unsigned 64-bit)")
OUT_OPTION = typer.Option(None, "--out", "-o", help="Output directory")
WORKERS_OPTION = typer.Option(None, "--workers", help="Parallel trial workers")
N_OPTION = typer.Option(..., "--n", "-n", help="Averaging scale N")
TIMES_OPTION = typer.Option(
    None, "--times", help="Strictly increasing times (default 0, 1, 2, ...)"
)
R_OPTION = typer.Option(2.0, "--r", help="Variation exponent r")
DELTA_OPTION = typer.Option(None, "--delta", help="Jump size for the jump count")
ZETA_OPTION = typer.Option(0.0, "--zeta", help="Frequency paired with floor(sqrt n)")
XI_OPTION = typer.Option(0.0, "--xi", help="Frequency paired with n")
LAM_OPTION = typer.Option(2.0, "--lam", help="Lacunarity ratio lambda > 1")
N_MAX_OPTION = typer.Option(2**16, "--n-max", help="Largest scale")
ORDER_OPTION = typer.Option(2, "--order", "-s", help="Gowers order s in [1, 5]")
GRID_OPTION = typer.Option(
    None, "--grid", help="Frequency grid size M (default 8x support, power of two)"
)
KINDS_ARGUMENT = typer.Argument(None, help="Experiment kinds (default: all)")
SWEEP_CONFIG_OPTION = typer.Option(
    None, "--config", "-c", help="Experiment config overriding the defaults of its kind"
)
REPORT_FILE_OPTION = typer.Option(
    None, "--file", help="Load a report.json or bundle directory instead of the store"
)


@app.callback()
def _configure(
    settings: Path = SETTINGS_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """Load lab settings and set up logging."""
    global _settings
    try:
        _settings = Config.load_from_file(settings)
    except Exception as e:
        console.print(f"[red]Error loading settings {settings}: {e}[/red]")
        raise typer.Exit(1) from None
    if debug:
        _settings = _settings.model_copy(update={"debug": True, "log_level": "debug"})
    setup_logging(_settings.log_level, _settings.debug)


@contextmanager
def _guarded(operation: str, **context: Any) -> Iterator[None]:
    """Log a failing command through the error handler and exit with status 1."""
    try:
        with error_handler("cli", operation, context):
            yield
    except Exception as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None


def _norms_table(title: str, f: GridFunction) -> Table:
    table = Table(title=title)
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("offset", str(f.offset))
    table.add_row("length", str(f.length))
    for label, p in (("l^1", 1.0), ("l^2", 2.0), ("l^inf", math.inf)):
        table.add_row(label, f"{lp_norm(f, p):.12g}")
    return table


def _report_table(report: ExperimentReport) -> Table:
    table = Table(title=f"{report.kind.value} (seed {report.config.seed})")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    for name, flag in report.passes.items():
        table.add_row(name, "[green]pass[/green]" if flag else "[red]fail[/red]")
    for name, fit in report.fits.items():
        axis = "semi-log" if fit.semilog else "log-log"
        table.add_row(f"{name} slope", f"[dim]{fit.slope:.4f} ({axis})[/dim]")
    return table


def _experiment_config(
    kind: ExperimentKind, config: Optional[Path], seed: Optional[int]
) -> ExperimentConfig:
    if config is None:
        chosen = _settings.default_seed if seed is None else seed
        return ExperimentConfig(kind=kind, seed=chosen)
    loaded = load_experiment_config(config)
    if loaded.kind is not kind:
        raise DomainError(
            f"{config} configures {loaded.kind.value}, not {kind.value}"
        )
    if seed is not None:
        loaded = ExperimentConfig(kind=kind, seed=seed, parameters=loaded.parameters)
    return loaded


def _sweep_overrides(configs: List[Path]) -> Dict[ExperimentKind, Path]:
    overrides: Dict[ExperimentKind, Path] = {}
    for path in configs:
        kind = load_experiment_config(path).kind
        if kind in overrides:
            msg = f"{overrides[kind]} and {path} both configure {kind.value}"
            raise DomainError(msg)
        overrides[kind] = path
    return overrides


def _run_with_spinner(cfg: ExperimentConfig, workers: int) -> ExperimentReport:
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        progress.add_task(f"Running {cfg.kind.value}...", total=None)
        return run_experiment(cfg, workers=workers)


def _bundle_dir(out: Optional[Path], cfg: ExperimentConfig) -> Path:
    base = out if out is not None else _settings.output_dir
    return base / cfg.kind.value / str(cfg.seed)


@app.command()
def avg(
    operator: AverageOperator = typer.Argument(..., help="Operator to evaluate"),
    first: Path = typer.Argument(..., help="First input, GridFunction JSON"),
    second: Optional[Path] = typer.Argument(None, help="Second input, if any"),
    n: int = N_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Evaluate an average of GridFunction JSON inputs at scale N."""
    with _guarded("avg", operator=operator.value, N=n):
        f = read_grid_function(first)
        if operator is AverageOperator.SMOOTHING:
            if second is not None:
                raise DomainError("smoothing takes a single input")
            result = linear_smoothing_average(f, n)
        else:
            if second is None:
                raise DomainError(f"{operator.value} takes two inputs")
            g = read_grid_function(second)
            op = {
                AverageOperator.BILINEAR: bilinear_average,
                AverageOperator.UPPER_HALF: upper_half_average,
                AverageOperator.DUAL_STAR: dual_star,
                AverageOperator.DUAL_STAR_STAR: dual_star_star,
            }[operator]
            result = op(f, g, n)
        console.print(_norms_table(f"{operator.value} average, N = {n}", result))
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            target = out / "average.json"
            target.write_text(result.to_json())
            console.print(f"[green]✓ Wrote {target}[/green]")


@app.command()
def variation(
    values: str = typer.Argument(..., help="Samples, comma-separated or JSON"),
    times: Optional[str] = TIMES_OPTION,
    r: float = R_OPTION,
    delta: Optional[float] = DELTA_OPTION,
) -> None:
    """r-variation, oscillation and jump count of a sequence."""
    with _guarded("variation", r=r):
        samples = parse_complex_numbers(values)
        if times is None:
            seq = IndexedSequence.from_samples(samples)
        else:
            seq = IndexedSequence([int(t) for t in parse_numbers(times)], samples)
        result = variation_norm(seq, r)
        table = Table(title=f"Variation, r = {r:g}")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("V^r", f"{result.value:.12g}")
        table.add_row("sup", f"{result.sup_term:.12g}")
        table.add_row("oscillation", f"{result.osc_term:.12g}")
        chain = [int(seq.times[i]) for i in result.witness_chain]
        table.add_row("chain", ", ".join(map(str, chain)))
        if delta is not None:
            jumps = jump_count(seq, delta)
            table.add_row(f"N_delta (delta = {delta:g})", str(jumps.count))
            table.add_row(
                "jump slack", f"{jump_inequality_slack(seq, delta, r):.12g}"
            )
        console.print(table)


@app.command()
def expsum(
    zeta: float = ZETA_OPTION,
    xi: float = XI_OPTION,
    lam: float = LAM_OPTION,
    n_max: int = N_MAX_OPTION,
    r: float = R_OPTION,
    delta: Optional[float] = DELTA_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Exponential partial sums over a lacunary set, with V^r and jump counts."""
    with _guarded("expsum", zeta=zeta, xi=xi):
        scales = lacunary_set(lam, 1, n_max).as_array()
        sums = exponential_partial_sums(zeta, xi, scales)[0]
        seq = IndexedSequence(scales, sums)
        table = Table(title=f"Partial sums at (zeta, xi) = ({zeta:g}, {xi:g})")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("scales", str(len(seq)))
        table.add_row("|S_N| at N_max", f"{abs(sums[-1]):.12g}")
        table.add_row(f"V^{r:g}", f"{variation_norm(seq, r).value:.12g}")
        if delta is not None:
            jumps = jump_count(seq, delta).count
            table.add_row(f"N_delta (delta = {delta:g})", str(jumps))
        console.print(table)
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            target = out / "expsum.csv"
            with open(target, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["N", "re", "im"])
                for N, value in zip(scales, sums):
                    writer.writerow([int(N), repr(value.real), repr(value.imag)])
            console.print(f"[green]✓ Wrote {target}[/green]")


@app.command()
def gowers(
    path: Path = typer.Argument(..., help="GridFunction JSON"),
    order: int = ORDER_OPTION,
    grid: Optional[int] = GRID_OPTION,
) -> None:
    """Gowers U^s norm of a GridFunction, with the U^2 witness frequency."""
    with _guarded("gowers", order=order):
        f = read_grid_function(path)
        table = Table(title=f"Gowers norms of {path.name}")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="green")
        table.add_row(f"U^{order}", f"{gowers_norm(f, order):.12g}")
        if not f.is_zero:
            M = grid if grid is not None else next_pow2(8 * f.length)
            xi, bound = u2_witness(f, M)
            table.add_row("witness xi", f"{xi:.12g}")
            table.add_row("witness bound", f"{bound:.12g}")
        console.print(table)


@app.command()
def verify(
    kind: ExperimentKind = typer.Argument(..., help="Experiment kind"),
    config: Optional[Path] = CONFIG_OPTION,
    seed: Optional[int] = SEED_OPTION,
    out: Optional[Path] = OUT_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
) -> None:
    """Run one experiment, write its bundle, exit 0 iff every check passes."""
    with _guarded("verify", kind=kind.value):
        cfg = _experiment_config(kind, config, seed)
        report = _run_with_spinner(cfg, workers or _settings.workers)
        target = _bundle_dir(out, cfg)
        write_report_bundle(report, target)
        console.print(_report_table(report))
        console.print(f"[dim]Bundle: {target}[/dim]")
    if not report.passed:
        raise typer.Exit(1)


@app.command()
def sweep(
    kinds: Optional[List[ExperimentKind]] = KINDS_ARGUMENT,
    configs: Optional[List[Path]] = SWEEP_CONFIG_OPTION,
    seed: Optional[int] = SEED_OPTION,
    out: Optional[Path] = OUT_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
) -> None:
    """Run several experiments and store the reports.

    Kinds without a ``--config`` run with default parameters; a config for a
    kind not named on the command line adds that kind to the sweep.
    """
    chosen = list(kinds or ExperimentKind)
    with _guarded("sweep", kinds=[k.value for k in chosen]):
        overrides = _sweep_overrides(configs or [])
        chosen += [kind for kind in overrides if kind not in chosen]
        reports = []
        with ResultStore(_settings.results_path, _settings.results_map_size) as store:
            for kind in chosen:
                cfg = _experiment_config(kind, overrides.get(kind), seed)
                report = _run_with_spinner(cfg, workers or _settings.workers)
                store.put_report(report)
                write_report_bundle(report, _bundle_dir(out, cfg))
                reports.append(report)

        table = Table(title="Sweep Summary")
        table.add_column("Experiment", style="cyan")
        table.add_column("Seed", style="dim")
        table.add_column("Verdict")
        table.add_column("Seconds", style="yellow")
        for report in reports:
            verdict = "[green]pass[/green]" if report.passed else "[red]fail[/red]"
            table.add_row(
                report.kind.value,
                str(report.config.seed),
                verdict,
                f"{report.duration_seconds:.1f}",
            )
        console.print(table)
    if not all(report.passed for report in reports):
        raise typer.Exit(1)


@app.command()
def report(
    kind: Optional[ExperimentKind] = typer.Argument(None, help="Experiment kind"),
    seed: Optional[int] = SEED_OPTION,
    out: Optional[Path] = OUT_OPTION,
    from_file: Optional[Path] = REPORT_FILE_OPTION,
) -> None:
    """List stored reports, or show and re-export one."""
    with _guarded("report"):
        if from_file is not None:
            loaded: Optional[ExperimentReport] = load_report(from_file)
        elif kind is None:
            with ResultStore(
                _settings.results_path, _settings.results_map_size
            ) as store:
                keys = store.list_reports()
            if not keys:
                console.print("[yellow]No stored reports[/yellow]")
                return
            table = Table(title="Stored Reports")
            table.add_column("Key", style="cyan")
            for key in keys:
                table.add_row(key)
            console.print(table)
            return
        else:
            chosen = _settings.default_seed if seed is None else seed
            with ResultStore(
                _settings.results_path, _settings.results_map_size
            ) as store:
                loaded = store.get_report(kind, chosen)
            if loaded is None:
                raise DomainError(f"no stored report for {kind.value} seed {chosen}")

        console.print(_report_table(loaded))
        if out is not None:
            write_report_bundle(loaded, out)
            console.print(f"[green]✓ Wrote bundle to {out}[/green]")


@app.command()
def version() -> None:
    """Show version information."""
    from ergavg import __version__

    typer.echo(f"ergavg v{__version__}")


def main() -> None:
    """Run the command line interface."""
    app()
