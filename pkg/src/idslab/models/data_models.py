"""Data models for experiment configuration, reports and run manifests."""

import hashlib
import json
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic.alias_generators import to_camel

from ..environment import CouplingLaw, SingleSitePotential, SiteTerm, uniform_bound
from ..group import GroupElement, GroupFamily, GroupSpec, InterEdge, PeriodicGraph

ARTIFACT_VERSION = "1"


class _CamelModel(BaseModel):
    """camelCase on the wire, snake_case in Python."""

    model_config = ConfigDict(
        alias_generator=to_camel, populate_by_name=True, extra="forbid", frozen=True
    )


class GroupConfig(_CamelModel):
    """Group family, rank and optional explicit generating set."""

    family: GroupFamily = GroupFamily.INTEGER_LATTICE
    rank: int = Field(default=1, ge=1, le=7)
    generators: Optional[List[List[int]]] = None  # None: the standard set

    @model_validator(mode="after")
    def _check_rank(self) -> "GroupConfig":
        if self.family is GroupFamily.HEISENBERG and self.rank != 3:
            raise ValueError("the Heisenberg group has rank 3")
        return self

    def to_spec(self) -> GroupSpec:
        if self.generators is None:
            if self.family is GroupFamily.HEISENBERG:
                return GroupSpec.heisenberg()
            return GroupSpec.integer_lattice(self.rank)
        coords = {tuple(g) for g in self.generators} | {(0,) * self.rank}
        gens = tuple(GroupElement(c, self.family.value) for c in sorted(coords))
        return GroupSpec(self.family.value, self.rank, gens)


class InterEdgeConfig(_CamelModel):
    generator: List[int]
    source: int = Field(ge=0)
    target: int = Field(ge=0)


class GraphConfig(_CamelModel):
    """Fiber F and edge pattern; the Cayley graph when no edges are listed."""

    fiber_size: int = Field(default=1, ge=1, le=16)
    intra_edges: List[Tuple[int, int]] = Field(default_factory=list)
    inter_edges: List[InterEdgeConfig] = Field(default_factory=list)

    def to_graph(self, spec: GroupSpec) -> PeriodicGraph:
        if self.fiber_size == 1 and not self.intra_edges and not self.inter_edges:
            return PeriodicGraph.cayley(spec)
        edges = tuple(
            InterEdge(GroupElement(tuple(e.generator), spec.family), e.source, e.target)
            for e in self.inter_edges
        )
        return PeriodicGraph(spec, self.fiber_size, tuple(self.intra_edges), edges)


class SelectRadiiConfig(_CamelModel):
    max_radius: int = Field(ge=1)
    d_max: int = Field(default=1, ge=1)
    epsilon: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_range(self) -> "SelectRadiiConfig":
        if self.max_radius < self.d_max:
            raise ValueError("maxRadius must be at least dMax")
        return self


class FolnerConfig(_CamelModel):
    """Ball radii (explicit or selected), temperedness constant and h."""

    radii: Optional[List[int]] = None
    select_radii: Optional[SelectRadiiConfig] = None
    temperedness: float = Field(default=4.0, ge=1.0)
    h: int = Field(default=0, ge=0)
    toggle_seed: int = Field(default=0, ge=0)
    toggle_probability: float = Field(default=0.5, ge=0.0, le=1.0)
    d_max: int = Field(default=1, ge=0)  # isoperimetric depths 0..dMax
    decay_threshold: float = Field(default=0.05, gt=0)

    @field_validator("radii")
    @classmethod
    def _check_radii(cls, radii: Optional[List[int]]) -> Optional[List[int]]:
        if radii is None:
            return radii
        if not radii:
            raise ValueError("radii must not be empty")
        if radii[0] < 0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be non-negative and strictly increasing")
        return radii

    @model_validator(mode="after")
    def _one_source(self) -> "FolnerConfig":
        if (self.radii is None) == (self.select_radii is None):
            raise ValueError("give exactly one of radii and selectRadii")
        return self


class PotentialConfig(_CamelModel):
    """Single-site profile u and coupling law μ; no terms means V = 0."""

    terms: List[SiteTerm] = Field(default_factory=list)
    law: Optional[CouplingLaw] = None
    c0: Optional[float] = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def _law_with_terms(self) -> "PotentialConfig":
        if self.terms and self.law is None:
            raise ValueError("a coupling law is required when terms are given")
        return self

    @property
    def is_free(self) -> bool:
        return not self.terms

    def single_site(self) -> Optional[SingleSitePotential]:
        return None if self.is_free else SingleSitePotential(terms=tuple(self.terms))

    def bound(self) -> float:
        """C_0: the override, else max|ω|·Σ|u|."""
        if self.c0 is not None:
            return self.c0
        profile = self.single_site()
        if profile is None or self.law is None:
            return 0.0
        return uniform_bound(self.law, profile)


class LinearGrid(_CamelModel):
    start: float
    stop: float
    num: int = Field(ge=1)

    def points(self) -> List[float]:
        return [float(x) for x in np.linspace(self.start, self.stop, self.num)]


def _expand_grid(value: Any) -> Any:
    if isinstance(value, dict):
        return LinearGrid.model_validate(value).points()
    return value


def _check_sorted(grid: List[float]) -> List[float]:
    if not grid:
        raise ValueError("grid must not be empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted")
    return grid


class SolverConfig(_CamelModel):
    method: Literal["ql", "lapack"] = "ql"
    max_dense_dimension: Optional[int] = Field(default=None, ge=1)
    chebyshev_probes: int = Field(default=32, ge=2)
    chebyshev_tolerance: float = Field(default=1e-8, gt=0)


class HeatConfig(_CamelModel):
    """Ambient pad, boundary table depth and ergodic reference sampling."""

    ambient_pad: int = Field(default=20, ge=0)
    table_depth: int = Field(default=20, ge=0)
    table_epsilon: float = Field(default=1e-6, gt=0)
    reference_seeds: List[int] = Field(default_factory=lambda: list(range(1000, 1032)))


class CheckConfig(_CamelModel):
    """Tolerances of the diagnostics."""

    cauchy_threshold: float = Field(default=0.05, gt=0)
    heat_lemma_threshold: float = Field(default=0.01, gt=0)
    non_randomness_tolerance: float = Field(default=0.01, gt=0)
    verify_samples: int = Field(default=200, ge=1)


class ExperimentConfig(_CamelModel):
    """One experiment, loaded from a JSON file."""

    name: str = "experiment"
    group: GroupConfig = Field(default_factory=GroupConfig)
    graph: GraphConfig = Field(default_factory=GraphConfig)
    folner: FolnerConfig
    potential: PotentialConfig = Field(default_factory=PotentialConfig)
    lambda_grid: List[float]
    t_grid: List[float]
    seeds: List[List[int]] = Field(default_factory=lambda: [[0]])
    solver: SolverConfig = Field(default_factory=SolverConfig)
    heat: HeatConfig = Field(default_factory=HeatConfig)
    checks: CheckConfig = Field(default_factory=CheckConfig)
    output_dir: str = "results"

    @field_validator("lambda_grid", mode="before")
    @classmethod
    def _expand_lambda(cls, value: Any) -> Any:
        return _expand_grid(value)

    @field_validator("t_grid", mode="before")
    @classmethod
    def _expand_t(cls, value: Any) -> Any:
        return _expand_grid(value)

    @field_validator("lambda_grid")
    @classmethod
    def _sorted_lambda(cls, grid: List[float]) -> List[float]:
        return _check_sorted(grid)

    @field_validator("t_grid")
    @classmethod
    def _positive_t(cls, grid: List[float]) -> List[float]:
        if any(t <= 0 for t in grid):
            raise ValueError("times must be positive")
        return _check_sorted(grid)

    @field_validator("seeds")
    @classmethod
    def _distinct_seeds(cls, groups: List[List[int]]) -> List[List[int]]:
        if not groups or any(not g for g in groups):
            raise ValueError("seed groups must be non-empty")
        flat = [s for g in groups for s in g]
        if len(set(flat)) != len(flat):
            raise ValueError("seeds must be distinct across all groups")
        if any(not 0 <= s < 2**64 for s in flat):
            raise ValueError("seeds must be 64-bit unsigned integers")
        return groups

    @property
    def all_seeds(self) -> List[int]:
        return [s for g in self.seeds for s in g]

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON dump."""
        payload = json.dumps(self.echo(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


class CheckRecord(_CamelModel):
    """One named verdict."""

    name: str
    passed: bool
    detail: str = ""
    value: Optional[float] = None
    tolerance: Optional[float] = None


class StageStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"


class RunReport(_CamelModel):
    """report.json: verdicts, tolerances, seeds and the config echo; no timings."""

    artifact_version: str = ARTIFACT_VERSION
    command: str
    config_hash: str
    status: StageStatus
    seeds: List[List[int]]
    tolerances: Dict[str, float] = Field(default_factory=dict)
    checks: List[CheckRecord] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    config: Dict[str, Any]


class FileEntry(_CamelModel):
    path: str
    sha256: str
    size_bytes: int


class RunManifest(_CamelModel):
    """manifest.json: config hash, stage timings and every emitted file with its digest."""

    artifact_version: str = ARTIFACT_VERSION
    config_hash: str
    timings: Dict[str, float] = Field(default_factory=dict)
    files: List[FileEntry] = Field(default_factory=list)
