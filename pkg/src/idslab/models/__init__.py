"""Models package exports."""

from .data_models import (
    ARTIFACT_VERSION,
    CheckConfig,
    CheckRecord,
    ExperimentConfig,
    FileEntry,
    FolnerConfig,
    GraphConfig,
    GroupConfig,
    HeatConfig,
    InterEdgeConfig,
    LinearGrid,
    PotentialConfig,
    RunManifest,
    RunReport,
    SelectRadiiConfig,
    SolverConfig,
    StageStatus,
)
from .repository import SpectrumRepository

__all__ = [
    "ARTIFACT_VERSION",
    "CheckConfig",
    "CheckRecord",
    "ExperimentConfig",
    "FileEntry",
    "FolnerConfig",
    "GraphConfig",
    "GroupConfig",
    "HeatConfig",
    "InterEdgeConfig",
    "LinearGrid",
    "PotentialConfig",
    "RunManifest",
    "RunReport",
    "SelectRadiiConfig",
    "SolverConfig",
    "StageStatus",
    "SpectrumRepository",
]
