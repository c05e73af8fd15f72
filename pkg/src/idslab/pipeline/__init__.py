"""IDS pipeline: admissible sequences, spectra sweeps, Laplace transforms and limits."""

from .admissible import (
    MIN_ADMISSIBLE_LENGTH,
    AdmissibleSequence,
    ApproximationSide,
    admissible_from_domains,
    approximation_radius,
    build_admissible,
)
from .ergodic import (
    ConstantSiteFunction,
    ErgodicResult,
    HeatDiagonalSiteFunction,
    PotentialSiteFunction,
    SiteFunction,
    ensemble_reference,
    ergodic_average,
)
from .heat_lemma import (
    HeatKernelLemmaResult,
    heat_kernel_lemma_gap,
    padded_domain,
    padded_heat_diagonal,
)
from .ids import IDSEstimate, LaplaceReport, counting_functions, detect_atoms, laplace_pipeline
from .limits import (
    DEFAULT_CAUCHY_THRESHOLD,
    RISING_GAPS_NOTE,
    STATIONARY_NOTE,
    Hypothesis,
    HypothesisViolation,
    NonRandomnessReport,
    PasturSubinVerdict,
    laplace_witness,
    non_randomness_check,
    pastur_subin_limit,
)
from .sweep import SolveTask, SweepResult, resolve_workers, run_tasks, solve_sweep, solve_task

__all__ = [
    "MIN_ADMISSIBLE_LENGTH",
    "AdmissibleSequence",
    "ApproximationSide",
    "admissible_from_domains",
    "approximation_radius",
    "build_admissible",
    "ConstantSiteFunction",
    "ErgodicResult",
    "HeatDiagonalSiteFunction",
    "PotentialSiteFunction",
    "SiteFunction",
    "ensemble_reference",
    "ergodic_average",
    "HeatKernelLemmaResult",
    "heat_kernel_lemma_gap",
    "padded_domain",
    "padded_heat_diagonal",
    "IDSEstimate",
    "LaplaceReport",
    "counting_functions",
    "detect_atoms",
    "laplace_pipeline",
    "DEFAULT_CAUCHY_THRESHOLD",
    "RISING_GAPS_NOTE",
    "STATIONARY_NOTE",
    "Hypothesis",
    "HypothesisViolation",
    "NonRandomnessReport",
    "PasturSubinVerdict",
    "laplace_witness",
    "non_randomness_check",
    "pastur_subin_limit",
    "SolveTask",
    "SweepResult",
    "resolve_workers",
    "run_tasks",
    "solve_sweep",
    "solve_task",
]
