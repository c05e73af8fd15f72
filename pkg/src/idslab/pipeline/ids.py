"""Counting functions and Laplace transforms along an admissible sequence."""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from ..environment import CouplingLaw, SingleSitePotential
from ..errors import LaplaceIdentityError
from ..spectral import DistributionFunction, Method, counting_function, heat_trace
from .admissible import AdmissibleSequence
from .sweep import SweepResult, solve_sweep

logger = logging.getLogger(__name__)

ATOM_WINDOW = 1e-6
ATOM_MASS = 1e-3


@dataclass(frozen=True, eq=False)
class IDSEstimate:
    """N^ω_{D_n}(λ) over (n, seed, λ) and the largest-n limit estimate."""

    lambda_grid: np.ndarray
    per_index: np.ndarray  # shape (n, seed, λ)
    indices: Tuple[int, ...]
    seeds: Tuple[int, ...]
    volumes: Tuple[int, ...]
    spectral_minima: np.ndarray  # shape (n, seed)
    spectral_maxima: np.ndarray
    atom_mask: np.ndarray  # λ points near a detected jump cluster

    @property
    def seed_means(self) -> np.ndarray:
        """Seed-averaged counting functions, shape (n, λ)."""
        return self.per_index.mean(axis=1)

    @property
    def limit(self) -> np.ndarray:
        """Largest-n counting function averaged over seeds."""
        return self.seed_means[-1]

    @property
    def cauchy_gaps(self) -> np.ndarray:
        """sup_λ |N̄_{n+1} − N̄_n| for consecutive n."""
        means = self.seed_means
        if means.shape[0] < 2:
            return np.zeros(0)
        return np.max(np.abs(np.diff(means, axis=0)), axis=1)

    @property
    def limit_gaps(self) -> np.ndarray:
        """Per-λ gap between the two largest indices."""
        means = self.seed_means
        if means.shape[0] < 2:
            return np.zeros_like(self.lambda_grid)
        return np.abs(means[-1] - means[-2])

    def for_seeds(self, seeds: Sequence[int]) -> "IDSEstimate":
        """Restriction to a seed group."""
        positions = [self.seeds.index(int(s)) for s in seeds]
        return replace(
            self,
            per_index=self.per_index[:, positions, :],
            seeds=tuple(int(s) for s in seeds),
            spectral_minima=self.spectral_minima[:, positions],
            spectral_maxima=self.spectral_maxima[:, positions],
        )


def detect_atoms(
    sweep: SweepResult,
    grid: np.ndarray,
    window: float = ATOM_WINDOW,
    mass: float = ATOM_MASS,
) -> np.ndarray:
    """Mask grid points carrying a jump cluster in the largest-n spectra.

    A point is masked when the seed-averaged spectral mass within ``window``
    exceeds both ``mass`` and 2.5 eigenvalues' worth of weight.
    """
    n = sweep.indices[-1]
    volume = sweep.volumes[-1]
    threshold = max(mass, 2.5 / volume)
    masses = np.zeros(grid.shape[0])
    for seed in sweep.seeds:
        values = sweep.spectrum(n, seed).eigenvalues
        upper = np.searchsorted(values, grid + window, side="right")
        lower = np.searchsorted(values, grid - window, side="left")
        masses += (upper - lower) / volume
    masses /= len(sweep.seeds)
    return masses > threshold


def counting_functions(
    adm: AdmissibleSequence,
    seeds: Sequence[int],
    potential: Optional[SingleSitePotential],
    law: Optional[CouplingLaw],
    lambda_grid: Sequence[float],
    sweep: Optional[SweepResult] = None,
    method: Method = "ql",
    workers: Optional[int] = None,
) -> IDSEstimate:
    """Evaluate N^ω_{D_n} on the λ grid for every (n, seed).

    Args:
        adm: Admissible sequence
        seeds: Environment seeds
        potential: Single-site profile
        law: Coupling law
        lambda_grid: Sorted evaluation points
        sweep: Spectra from an earlier solve, reused when given
        method: Eigensolver backend when solving here
        workers: Pool size when solving here

    Returns:
        The IDS estimate with diagnostics
    """
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("lambda grid is empty")
    if np.any(np.diff(grid) < 0):
        raise ValueError("lambda grid must be sorted")
    sweep = sweep or solve_sweep(adm, seeds, law, potential, method, workers)
    seeds = tuple(int(s) for s in seeds)

    shape = (len(sweep.indices), len(seeds))
    per_index = np.zeros(shape + (grid.shape[0],))
    minima = np.zeros(shape)
    maxima = np.zeros(shape)
    for i, n in enumerate(sweep.indices):
        for j, seed in enumerate(seeds):
            spectrum = sweep.spectrum(n, seed)
            per_index[i, j] = counting_function(spectrum, grid)
            minima[i, j] = spectrum.eigenvalues[0]
            maxima[i, j] = spectrum.eigenvalues[-1]

    estimate = IDSEstimate(
        lambda_grid=grid,
        per_index=per_index,
        indices=sweep.indices,
        seeds=seeds,
        volumes=sweep.volumes,
        spectral_minima=minima,
        spectral_maxima=maxima,
        atom_mask=detect_atoms(sweep, grid),
    )
    final_gap = float(estimate.cauchy_gaps[-1]) if estimate.cauchy_gaps.size else 0.0
    logger.info(
        f"[PIPELINE] counting functions on {grid.shape[0]} points, final Cauchy gap {final_gap:.3g}"
    )
    return estimate


@dataclass(frozen=True, eq=False)
class LaplaceReport:
    """Ñ^ω_{D_n}(t) over (n, seed, t) with references and kernel-lemma gaps."""

    t_grid: np.ndarray
    values: np.ndarray  # shape (n, seed, t)
    indices: Tuple[int, ...]
    seeds: Tuple[int, ...]
    volumes: Tuple[int, ...]
    identity_gap: float = 0.0
    reference: Optional[np.ndarray] = None  # ergodic reference per t
    kernel_gaps: Optional[np.ndarray] = None  # shape (n, t)
    c0: float = 0.0

    @property
    def seed_means(self) -> np.ndarray:
        return self.values.mean(axis=1)

    @property
    def cauchy_gaps(self) -> np.ndarray:
        """|Ñ_{n+1}(t) − Ñ_n(t)| of seed means, shape (n − 1, t)."""
        return np.abs(np.diff(self.seed_means, axis=0))

    def with_references(
        self, reference: Optional[np.ndarray] = None, kernel_gaps: Optional[np.ndarray] = None
    ) -> "LaplaceReport":
        """Copy carrying the ergodic reference per t and kernel-lemma gaps per (n, t)."""
        if reference is not None:
            reference = np.asarray(reference, dtype=float)
            if reference.shape != self.t_grid.shape:
                raise ValueError("one reference value per t is required")
        if kernel_gaps is not None:
            kernel_gaps = np.asarray(kernel_gaps, dtype=float)
            if kernel_gaps.shape != (len(self.indices), self.t_grid.shape[0]):
                raise ValueError("kernel gaps must have shape (n, t)")
            if np.any(kernel_gaps < 0):
                raise ValueError("kernel gaps must be non-negative")
        return replace(self, reference=reference, kernel_gaps=kernel_gaps)

    def within_bounds(self) -> bool:
        """All values in (0, e^{C_0 t}]."""
        upper = np.exp(self.c0 * self.t_grid)
        return bool(np.all(self.values > 0) and np.all(self.values <= upper * (1 + 1e-12)))


def laplace_pipeline(
    adm: AdmissibleSequence,
    seeds: Sequence[int],
    potential: Optional[SingleSitePotential],
    law: Optional[CouplingLaw],
    t_grid: Sequence[float],
    sweep: Optional[SweepResult] = None,
    c0: float = 0.0,
    method: Method = "ql",
    workers: Optional[int] = None,
) -> LaplaceReport:
    """Normalized heat traces per (n, seed, t), checked against ∫ e^{-tλ} dN exactly.

    Raises:
        LaplaceIdentityError: the trace and the Stieltjes integral differ
    """
    grid = np.asarray(t_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise ValueError("t grid must be non-empty and positive")
    sweep = sweep or solve_sweep(adm, seeds, law, potential, method, workers)
    seeds = tuple(int(s) for s in seeds)

    values = np.zeros((len(sweep.indices), len(seeds), grid.shape[0]))
    worst = 0.0
    for i, n in enumerate(sweep.indices):
        for j, seed in enumerate(seeds):
            spectrum = sweep.spectrum(n, seed)
            distribution = DistributionFunction.from_spectrum(spectrum)
            for k, t in enumerate(grid):
                trace = heat_trace(spectrum, float(t))
                stieltjes = distribution.laplace_transform(float(t))
                gap = abs(trace - stieltjes)
                if gap != 0.0:
                    raise LaplaceIdentityError(
                        f"trace {trace!r} != Stieltjes integral {stieltjes!r} "
                        f"at n={n}, seed={seed}, t={t}"
                    )
                worst = max(worst, gap)
                values[i, j, k] = trace

    logger.info(f"[PIPELINE] Laplace identity exact on {values.size} (n, seed, t) points")
    return LaplaceReport(
        t_grid=grid,
        values=values,
        indices=sweep.indices,
        seeds=seeds,
        volumes=sweep.volumes,
        identity_gap=worst,
        c0=c0,
    )
