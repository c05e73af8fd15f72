"""Experiment stages shared by the CLI subcommands."""

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional

import numpy as np
from pydantic import ValidationError

from ..environment import CouplingLaw, EnvironmentSample, SingleSitePotential
from ..errors import ConfigurationError, IDSLabError
from ..folner import (
    FolnerSequence,
    IsoperimetricReport,
    check_folner_isoperimetric_equivalence,
    select_radii,
)
from ..group import GroupFamily, GroupSpec, PeriodicGraph
from ..models import ExperimentConfig, SpectrumRepository
from ..pipeline import (
    AdmissibleSequence,
    HeatDiagonalSiteFunction,
    IDSEstimate,
    LaplaceReport,
    NonRandomnessReport,
    PasturSubinVerdict,
    SweepResult,
    build_admissible,
    counting_functions,
    ensemble_reference,
    heat_kernel_lemma_gap,
    laplace_pipeline,
    non_randomness_check,
    pastur_subin_limit,
    solve_sweep,
)
from ..spectral import BoundaryTable, boundary_sensitivity_table

logger = logging.getLogger(__name__)


def load_config(path: Path) -> ExperimentConfig:
    """Parse and validate an experiment config file.

    Raises:
        ConfigurationError: unreadable JSON or a schema violation (with its field path)
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON: {exc}") from exc
    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        field_path = ".".join(str(part) for part in first["loc"])
        raise ConfigurationError(first["msg"], field_path) from exc


@dataclass
class Experiment:
    """Validated config turned into domain objects, plus stage timings."""

    config: ExperimentConfig
    spec: GroupSpec
    graph: PeriodicGraph
    potential: Optional[SingleSitePotential]
    law: Optional[CouplingLaw]
    c0: float
    output_dir: Path
    workers: Optional[int] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_config(
        cls,
        config: ExperimentConfig,
        output_dir: Optional[str] = None,
        workers: Optional[int] = None,
    ) -> "Experiment":
        try:
            spec = config.group.to_spec()
        except ValueError as exc:
            raise ConfigurationError(str(exc), "group") from exc
        try:
            graph = config.graph.to_graph(spec)
        except ValueError as exc:
            raise ConfigurationError(str(exc), "graph") from exc
        try:
            potential = config.potential.single_site()
            c0 = config.potential.bound()
        except ValueError as exc:
            raise ConfigurationError(str(exc), "potential") from exc
        return cls(
            config=config,
            spec=spec,
            graph=graph,
            potential=potential,
            law=config.potential.law,
            c0=c0,
            output_dir=Path(output_dir or config.output_dir),
            workers=workers,
        )

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - start, 6)

    @property
    def config_hash(self) -> str:
        return self.config.config_hash()

    @property
    def free_dimension(self) -> Optional[int]:
        """d when the graph is the standard Cayley graph of ℤ^d."""
        if self.spec.family != GroupFamily.INTEGER_LATTICE.value:
            return None
        if self.graph != PeriodicGraph.cayley(GroupSpec.integer_lattice(self.spec.rank)):
            return None
        return self.spec.rank

    def environment(self, seed: int) -> Optional[EnvironmentSample]:
        if self.law is None or self.potential is None:
            return None
        return EnvironmentSample.fresh(seed, self.law, self.spec)

    def repository(self) -> SpectrumRepository:
        return SpectrumRepository(str(self.output_dir / "cache"))


def folner_sequence(exp: Experiment) -> FolnerSequence:
    params = exp.config.folner
    selection = params.select_radii
    if selection is None:
        return FolnerSequence.combinatorial_balls(exp.spec, params.radii or [])
    radii = select_radii(exp.spec, selection.max_radius, selection.d_max, selection.epsilon)
    if not radii:
        raise ConfigurationError(
            f"no radius up to {selection.max_radius} passes", "folner.selectRadii"
        )
    return FolnerSequence.combinatorial_balls(exp.spec, radii)


def folner_stage(exp: Experiment) -> IsoperimetricReport:
    params = exp.config.folner
    with exp.stage("folner"):
        seq = folner_sequence(exp)
        return check_folner_isoperimetric_equivalence(
            seq, exp.graph, params.d_max, params.decay_threshold
        )


def admissible_stage(exp: Experiment) -> AdmissibleSequence:
    params = exp.config.folner
    with exp.stage("admissible"):
        return build_admissible(
            folner_sequence(exp),
            exp.graph,
            params.temperedness,
            params.h,
            params.toggle_seed,
            params.toggle_probability,
        )


def sweep_stage(exp: Experiment, adm: AdmissibleSequence) -> SweepResult:
    """Solve every (n, seed) and cache the spectra."""
    with exp.stage("solve"):
        sweep = solve_sweep(
            adm,
            exp.config.all_seeds,
            exp.law,
            exp.potential,
            exp.config.solver.method,
            exp.workers,
            exp.config.solver.max_dense_dimension,
        )
    exp.repository().save(exp.config_hash, sweep)
    return sweep


def cached_sweep_stage(exp: Experiment, adm: AdmissibleSequence) -> SweepResult:
    """Spectra saved by an earlier run with the same config hash."""
    law = exp.law if exp.potential is not None else None
    sweep = exp.repository().load(exp.config_hash, law)
    if sweep is None:
        raise IDSLabError(f"no cached spectra for config {exp.config_hash[:12]}, run ids first")
    if sweep.volumes != adm.volumes or sweep.seeds != tuple(exp.config.all_seeds):
        raise IDSLabError("cached spectra do not match the admissible sequence")
    return sweep


def boundary_table_stage(exp: Experiment) -> BoundaryTable:
    heat = exp.config.heat
    with exp.stage("boundary_table"):
        return boundary_sensitivity_table(
            exp.graph,
            exp.config.t_grid,
            heat.table_depth,
            heat.table_epsilon,
            omega=exp.environment(exp.config.all_seeds[0]),
            potential=exp.potential,
        )


@dataclass
class PipelineOutcome:
    """Everything the ids/report subcommands emit."""

    adm: AdmissibleSequence
    idse: IDSEstimate
    laplace: LaplaceReport
    verdict: PasturSubinVerdict
    non_randomness: Optional[NonRandomnessReport]


def kernel_stage(
    exp: Experiment,
    adm: AdmissibleSequence,
    sweep: SweepResult,
    table: Optional[BoundaryTable] = None,
) -> LaplaceReport:
    """Laplace transforms with ergodic references and kernel-lemma gaps per (n, t)."""
    config = exp.config
    with exp.stage("laplace"):
        report = laplace_pipeline(
            adm, config.all_seeds, exp.potential, exp.law, config.t_grid, sweep=sweep, c0=exp.c0
        )
    with exp.stage("heat_kernel"):
        seed = config.all_seeds[0]
        omega = exp.environment(seed)
        pad = config.heat.ambient_pad
        tolerance = config.solver.chebyshev_tolerance
        references: List[float] = []
        gaps = np.zeros((len(adm), len(config.t_grid)))
        for k, t in enumerate(config.t_grid):
            f = HeatDiagonalSiteFunction(t, pad, exp.potential, exp.law, tolerance)
            value, _, _ = ensemble_reference(
                f, exp.graph, exp.law, config.heat.reference_seeds, omega
            )
            references.append(value)
            lemma = heat_kernel_lemma_gap(
                adm, omega, exp.potential, t, pad, sweep=sweep, table=table, tolerance=tolerance
            )
            gaps[:, k] = lemma.gaps
    return report.with_references(np.asarray(references), gaps)


def pipeline_stage(
    exp: Experiment, adm: AdmissibleSequence, sweep: SweepResult
) -> PipelineOutcome:
    config = exp.config
    with exp.stage("counting"):
        idse = counting_functions(
            adm, config.all_seeds, exp.potential, exp.law, config.lambda_grid, sweep=sweep
        )
    laplace = kernel_stage(exp, adm, sweep)
    with exp.stage("limits"):
        verdict = pastur_subin_limit(
            laplace, idse, exp.c0, exp.free_dimension, config.checks.cauchy_threshold
        )
        groups = None
        if len(config.seeds) >= 2:
            groups = non_randomness_check([idse.for_seeds(g) for g in config.seeds])
    return PipelineOutcome(adm, idse, laplace, verdict, groups)
