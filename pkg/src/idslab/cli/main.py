"""``idslab`` command group."""

import functools
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ..config import get_settings
from ..errors import ConfigurationError, IDSLabError
from ..folner import EquivalenceVerdict
from ..models import CheckRecord, RunReport, StageStatus
from ..pipeline import SolveTask, solve_task
from .reports import (
    write_folner_csv,
    write_htable_csv,
    write_ids_csv,
    write_json,
    write_laplace_csv,
    write_manifest,
    write_report,
    write_spectrum_csv,
)
from .runner import (
    Experiment,
    PipelineOutcome,
    admissible_stage,
    boundary_table_stage,
    cached_sweep_stage,
    folner_stage,
    kernel_stage,
    load_config,
    pipeline_stage,
    sweep_stage,
)
from .verify import check_laplace, check_outcome, run_checks

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_NUMERICAL = 1
EXIT_CONFIG = 2


def configure_logging(level: str, log_file: Optional[str] = None) -> None:
    """RichHandler on the ``idslab`` logger, plus a plain file handler when asked."""
    root = logging.getLogger("idslab")
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.setLevel(level.upper())
    root.addHandler(RichHandler(console=Console(stderr=True), show_path=False))
    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(file_handler)


@dataclass
class CliState:
    config_path: Path
    workers: Optional[int]
    output_dir: Optional[str]

    def experiment(self) -> Experiment:
        config = load_config(self.config_path)
        return Experiment.from_config(config, self.output_dir, self.workers)


def exit_codes(command: Callable[..., None]) -> Callable[..., None]:
    """Map ConfigurationError to exit 2 and other idslab errors to exit 1."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            command(*args, **kwargs)
        except ConfigurationError as exc:
            click.echo(f"Configuration error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except IDSLabError as exc:
            logger.error(f"[CLI] {type(exc).__name__}: {exc}")
            click.echo(f"Error: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)

    return wrapper


def _tolerances(exp: Experiment) -> Dict[str, float]:
    checks = exp.config.checks
    return {
        "cauchyThreshold": checks.cauchy_threshold,
        "heatLemmaThreshold": checks.heat_lemma_threshold,
        "nonRandomnessTolerance": checks.non_randomness_tolerance,
        "tableEpsilon": exp.config.heat.table_epsilon,
    }


def _run_report(
    exp: Experiment, command: str, checks: List[CheckRecord], summary: Dict[str, Any]
) -> RunReport:
    passed = all(record.passed for record in checks)
    return RunReport(
        command=command,
        config_hash=exp.config_hash,
        status=StageStatus.PASSED if passed else StageStatus.FAILED,
        seeds=exp.config.seeds,
        tolerances=_tolerances(exp),
        checks=checks,
        summary=summary,
        config=exp.config.echo(),
    )


def _finish(exp: Experiment, report: RunReport, files: Sequence[Path]) -> None:
    """Write report.json and the manifest, then print the check table."""
    emitted = list(files) + [write_report(exp.output_dir, report)]
    write_manifest(exp.output_dir, exp.config_hash, emitted, exp.timings)
    print_checks(report.checks, title=f"{report.command} ({report.status.value})")
    logger.info(f"[CLI] {len(emitted) + 1} files written to {exp.output_dir}")


def print_checks(checks: Sequence[CheckRecord], title: str) -> None:
    table = Table(title=title)
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_column("Value", justify="right")
    table.add_column("Tolerance", justify="right")
    for record in checks:
        result = "[green]pass[/green]" if record.passed else "[red]FAIL[/red]"
        value = "" if record.value is None else f"{record.value:.4g}"
        tolerance = "" if record.tolerance is None else f"{record.tolerance:.4g}"
        table.add_row(record.name, result, value, tolerance)
    Console().print(table)


def _ids_summary(outcome: PipelineOutcome) -> Dict[str, Any]:
    idse = outcome.idse
    gaps = idse.cauchy_gaps
    return {
        "volumes": [int(v) for v in idse.volumes],
        "finalCauchyGap": float(gaps[-1]) if gaps.size else 0.0,
        "pasturSubin": outcome.verdict.passed,
        "failedHypotheses": [h.value for h in outcome.verdict.failed_hypotheses],
        "notes": list(outcome.verdict.notes),
        "atomPoints": int(idse.atom_mask.sum()),
        "nonRandomnessDistance": (
            None if outcome.non_randomness is None else outcome.non_randomness.max_distance
        ),
    }


def _write_ids(exp: Experiment, command: str, outcome: PipelineOutcome) -> None:
    files = [
        write_ids_csv(exp.output_dir / "ids.csv", outcome.idse),
        write_laplace_csv(exp.output_dir / "laplace.csv", outcome.laplace),
    ]
    report = _run_report(exp, command, check_outcome(exp, outcome), _ids_summary(outcome))
    _finish(exp, report, files)


@click.group()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Experiment config (JSON).",
)
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker pool size.")
@click.option("--output-dir", default=None, help="Overrides outputDir of the config.")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
    help="Overrides IDSLAB_LOG_LEVEL.",
)
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: Path,
    workers: Optional[int],
    output_dir: Optional[str],
    log_level: Optional[str],
) -> None:
    """Integrated density of states experiments on amenable periodic graphs."""
    settings = get_settings()
    configure_logging(log_level or settings.log_level, settings.log_file)
    ctx.obj = CliState(config_path, workers or settings.workers, output_dir)


@cli.command()
@click.pass_obj
@exit_codes
def folner(state: CliState) -> None:
    """Følner sequence and the isoperimetric equivalence report."""
    exp = state.experiment()
    equivalence = folner_stage(exp)
    files = [write_folner_csv(exp.output_dir / "folner.csv", equivalence)]
    final = equivalence.rows[-1]
    checks = [
        CheckRecord(
            name="folner_isoperimetric_equivalence",
            passed=equivalence.verdict is not EquivalenceVerdict.MISMATCH,
            detail=equivalence.verdict.value,
            value=float(final.max_defect),
            tolerance=equivalence.threshold,
        )
    ]
    summary = {
        "verdict": equivalence.verdict.value,
        "indexSizes": [row.index_size for row in equivalence.rows],
        "finalDefect": float(final.max_defect),
        "finalQuotient": float(final.max_quotient),
    }
    _finish(exp, _run_report(exp, "folner", checks, summary), files)


@cli.command()
@click.option("--n", "index", type=int, default=-1, help="Sequence index (default: last).")
@click.option("--seed", type=int, default=None, help="Environment seed (default: first).")
@click.pass_obj
@exit_codes
def spectrum(state: CliState, index: int, seed: Optional[int]) -> None:
    """Solve one (n, seed) and dump its eigenvalues."""
    exp = state.experiment()
    adm = admissible_stage(exp)
    if not -len(adm) <= index < len(adm):
        raise click.BadParameter(f"index {index} outside 0..{len(adm) - 1}", param_hint="--n")
    n = index % len(adm)
    seed = exp.config.all_seeds[0] if seed is None else seed
    task = SolveTask(
        n, seed, adm.domains[n], exp.law, exp.potential, exp.config.solver.method
    )
    with exp.stage("solve"):
        result = solve_task(task)
    path = write_spectrum_csv(exp.output_dir / f"spectrum_n{n}_s{seed}.csv", result)
    write_manifest(exp.output_dir, exp.config_hash, [path], exp.timings)
    click.echo(f"{result.eigenvalues.shape[0]} eigenvalues written to {path}")


@cli.command()
@click.pass_obj
@exit_codes
def heat(state: CliState) -> None:
    """Heat-trace curves, kernel-lemma gaps and the h(t, ε) table."""
    exp = state.experiment()
    adm = admissible_stage(exp)
    sweep = sweep_stage(exp, adm)
    table = boundary_table_stage(exp)
    laplace = kernel_stage(exp, adm, sweep, table)
    files = [
        write_htable_csv(exp.output_dir / "htable.csv", table),
        write_laplace_csv(exp.output_dir / "laplace.csv", laplace),
    ]
    pads = {format(t, ".17g"): table.required_pad(t) for t in exp.config.t_grid}
    summary = {"requiredPad": pads, "ambientPad": exp.config.heat.ambient_pad}
    _finish(exp, _run_report(exp, "heat", check_laplace(exp, laplace), summary), files)


@cli.command()
@click.pass_obj
@exit_codes
def ids(state: CliState) -> None:
    """Full pipeline: counting functions, Laplace transforms and limit checks."""
    exp = state.experiment()
    adm = admissible_stage(exp)
    outcome = pipeline_stage(exp, adm, sweep_stage(exp, adm))
    _write_ids(exp, "ids", outcome)


@cli.command()
@click.pass_obj
@exit_codes
def report(state: CliState) -> None:
    """Regenerate the ids outputs from cached spectra."""
    exp = state.experiment()
    adm = admissible_stage(exp)
    outcome = pipeline_stage(exp, adm, cached_sweep_stage(exp, adm))
    _write_ids(exp, "ids", outcome)


@cli.command()
@click.pass_obj
@exit_codes
def verify(state: CliState) -> None:
    """All property suites plus the checks of a full pipeline run."""
    exp = state.experiment()
    adm = admissible_stage(exp)
    outcome = pipeline_stage(exp, adm, sweep_stage(exp, adm))
    checks = run_checks(exp, outcome)
    passed = all(record.passed for record in checks)
    verify_path = write_json(
        exp.output_dir / "verify.json",
        {
            "configHash": exp.config_hash,
            "passed": passed,
            "checks": [c.model_dump(mode="json", by_alias=True) for c in checks],
        },
    )
    _finish(exp, _run_report(exp, "verify", checks, _ids_summary(outcome)), [verify_path])
    if not passed:
        failed = ", ".join(c.name for c in checks if not c.passed)
        click.echo(f"Failed checks: {failed}", err=True)
        sys.exit(EXIT_NUMERICAL)


def main() -> None:
    cli(prog_name="idslab")


if __name__ == "__main__":
    main()
