"""Pastur–Šubin limit check and cross-seed non-randomness diagnostics."""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..operator import free_heat_diagonal
from .ids import IDSEstimate, LaplaceReport

logger = logging.getLogger(__name__)

DEFAULT_CAUCHY_THRESHOLD = 1e-2
STATIONARY_NOTE = "stationary sequence"
RISING_GAPS_NOTE = "Cauchy gaps increase along the sequence"


class Hypothesis(str, Enum):
    """Hypotheses of the Laplace-transform convergence lemma."""

    VANISH_BELOW = "a"  # every N_n vanishes below −C_0
    LAPLACE_BOUND = "b"  # Ñ_n(t) ≤ C_1(t)
    CAUCHY = "c"  # Ñ_n(t) converges for every t


@dataclass(frozen=True)
class HypothesisViolation:
    hypothesis: Hypothesis
    n: int
    t: Optional[float]
    value: float
    witness: float
    message: str


@dataclass(frozen=True, eq=False)
class PasturSubinVerdict:
    """Outcome of the check; the limit is the largest-n counting function."""

    passed: bool
    violations: Tuple[HypothesisViolation, ...]
    lambda_grid: np.ndarray
    limit: np.ndarray
    limit_gaps: np.ndarray
    laplace_gaps: np.ndarray
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def failed_hypotheses(self) -> List[Hypothesis]:
        return sorted({v.hypothesis for v in self.violations}, key=lambda h: h.value)


def laplace_witness(c0: float, t: np.ndarray, dimension: Optional[int]) -> np.ndarray:
    """C_1(t) = e^{C_0 t}·k_free(t), with k_free = 1 when the free diagonal is unknown."""
    if dimension is None:
        free = np.ones_like(t)
    else:
        free = np.array([free_heat_diagonal(float(s), dimension) for s in t])
    return np.exp(c0 * t) * free


def pastur_subin_limit(
    report: LaplaceReport,
    idse: IDSEstimate,
    c0: float,
    dimension: Optional[int] = None,
    cauchy_threshold: float = DEFAULT_CAUCHY_THRESHOLD,
    tolerance: float = 1e-10,
    bound_tolerance: float = 1e-8,
) -> PasturSubinVerdict:
    """Check hypotheses a)-c) on the computed data and emit the limit estimate.

    Args:
        report: Laplace transforms per (n, seed, t)
        idse: Counting functions over the same sequence
        c0: Uniform bound on the potential
        dimension: d for the free ℤ^d witness in b); 1 is used otherwise
        cauchy_threshold: Largest acceptable final Cauchy gap per t
        tolerance: Slack below −C_0 in a) and for rising Cauchy gaps in c)
        bound_tolerance: Relative slack in b)

    Returns:
        Verdict with every violation found
    """
    if report.t_grid.size == 0 or idse.lambda_grid.size == 0:
        raise ValueError("grids must be non-empty")
    violations: List[HypothesisViolation] = []
    notes: List[str] = []

    for n, seed in itertools.product(range(len(idse.indices)), range(len(idse.seeds))):
        lowest = float(idse.spectral_minima[n, seed])
        if lowest < -c0 - tolerance:
            violations.append(
                HypothesisViolation(
                    hypothesis=Hypothesis.VANISH_BELOW,
                    n=idse.indices[n],
                    t=None,
                    value=lowest,
                    witness=-c0,
                    message=(
                        f"eigenvalue {lowest:.6g} below -C_0 = {-c0:.6g} "
                        f"(seed {idse.seeds[seed]})"
                    ),
                )
            )

    witness = laplace_witness(c0, report.t_grid, dimension)
    for n, seed, k in zip(*np.nonzero(report.values > witness * (1 + bound_tolerance))):
        value = float(report.values[n, seed, k])
        violations.append(
            HypothesisViolation(
                hypothesis=Hypothesis.LAPLACE_BOUND,
                n=report.indices[n],
                t=float(report.t_grid[k]),
                value=value,
                witness=float(witness[k]),
                message=f"Laplace transform {value:.6g} exceeds {witness[k]:.6g}",
            )
        )

    laplace_gaps = report.cauchy_gaps
    if laplace_gaps.shape[0] == 0:
        notes.append("single index: Cauchy criterion not checked")
    else:
        if not np.any(laplace_gaps) and not np.any(idse.cauchy_gaps):
            notes.append(STATIONARY_NOTE)
        rising = np.nonzero(np.any(np.diff(laplace_gaps, axis=0) > tolerance, axis=0))[0]
        if rising.size:
            times = ", ".join(f"{report.t_grid[k]:g}" for k in rising)
            notes.append(f"{RISING_GAPS_NOTE} at t = {times}")
        last = laplace_gaps[-1]
        for k in np.nonzero(last > cauchy_threshold)[0]:
            violations.append(
                HypothesisViolation(
                    hypothesis=Hypothesis.CAUCHY,
                    n=report.indices[-1],
                    t=float(report.t_grid[k]),
                    value=float(last[k]),
                    witness=cauchy_threshold,
                    message=f"Cauchy gap {last[k]:.3g} above {cauchy_threshold}",
                )
            )

    passed = not violations
    if passed:
        logger.info(f"[PIPELINE] Pastur-Subin hypotheses hold on {report.t_grid.size} times")
    else:
        for v in violations[:5]:
            logger.warning(f"[PIPELINE] hypothesis {v.hypothesis.value}) fails: {v.message}")
    return PasturSubinVerdict(
        passed=passed,
        violations=tuple(violations),
        lambda_grid=idse.lambda_grid,
        limit=idse.limit,
        limit_gaps=idse.limit_gaps,
        laplace_gaps=laplace_gaps,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class NonRandomnessReport:
    """sup_λ |N̂_i − N̂_j| at the largest n for each pair of seed groups."""

    distances: Dict[Tuple[int, int], float]
    excluded_points: int

    @property
    def max_distance(self) -> float:
        return max(self.distances.values())


def non_randomness_check(estimates: Sequence[IDSEstimate]) -> NonRandomnessReport:
    """Compare group-averaged counting functions over disjoint seed groups.

    Grid points masked as atoms in any group are excluded.
    """
    if len(estimates) < 2:
        raise ValueError("need at least two seed groups")
    grid = estimates[0].lambda_grid
    seen: set = set()
    for est in estimates:
        if not np.array_equal(est.lambda_grid, grid):
            raise ValueError("seed groups were evaluated on different lambda grids")
        if est.indices != estimates[0].indices:
            raise ValueError("seed groups use different sequences")
        if seen.intersection(est.seeds):
            raise ValueError("seed groups must be disjoint")
        seen.update(est.seeds)

    masked = np.zeros(grid.shape[0], dtype=bool)
    for est in estimates:
        masked |= est.atom_mask
    keep = ~masked
    distances: Dict[Tuple[int, int], float] = {}
    for i, j in itertools.combinations(range(len(estimates)), 2):
        diff = np.abs(estimates[i].limit - estimates[j].limit)[keep]
        distances[(i, j)] = float(diff.max()) if diff.size else 0.0
    logger.info(
        f"[PIPELINE] non-randomness: max sup-distance {max(distances.values()):.3g} "
        f"over {len(estimates)} groups, {int(masked.sum())} atom points excluded"
    )
    return NonRandomnessReport(distances, int(masked.sum()))
