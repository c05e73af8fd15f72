"""Command-line surface: config loading, stage runner, report writers and checks."""

from .main import cli, main
from .runner import Experiment, PipelineOutcome, load_config
from .verify import run_checks

__all__ = ["cli", "main", "Experiment", "PipelineOutcome", "load_config", "run_checks"]
