"""Eigenvalue counting functions, heat traces and heat-kernel diagonals.

All sums of exponentials go through math.fsum, which rounds exactly once, so
a heat trace and the Laplace transform of the counting function built from
the same spectrum agree bit for bit.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .eigensolver import Spectrum


def _check_time(t: float) -> None:
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def count_below(spectrum: Spectrum, lam: float) -> Tuple[int, float]:
    """#{i : λ_i < λ} and that count divided by |D|."""
    count = int(np.searchsorted(spectrum.eigenvalues, lam, side="left"))
    volume = spectrum.volume
    return count, (count / volume if volume else 0.0)


def counting_function(spectrum: Spectrum, grid: Sequence[float]) -> np.ndarray:
    """Normalized counts N_D(λ) on a grid."""
    counts = np.searchsorted(spectrum.eigenvalues, np.asarray(grid, dtype=float), side="left")
    return counts / max(spectrum.volume, 1)


def heat_trace(spectrum: Spectrum, t: float, volume: Optional[int] = None) -> float:
    """(1/|D|) Σ e^{-tλ_i}."""
    _check_time(t)
    vol = spectrum.volume if volume is None else volume
    return math.fsum(math.exp(-t * float(lam)) for lam in spectrum.eigenvalues) / vol


def heat_kernel_diagonal(spectrum: Spectrum, t: float, x: int) -> float:
    """k_D(t, x, x) = Σ e^{-tλ_i} v_i(x)²."""
    _check_time(t)
    if spectrum.eigenvectors is None:
        raise ValueError("heat kernel diagonal needs eigenvectors")
    row = spectrum.eigenvectors[x]
    return math.fsum(
        math.exp(-t * float(lam)) * float(v) * float(v) for lam, v in zip(spectrum.eigenvalues, row)
    )


def heat_kernel_diagonals(spectrum: Spectrum, t: float) -> np.ndarray:
    """k_D(t, x, x) for every x (vectorised, not exactly rounded)."""
    _check_time(t)
    if spectrum.eigenvectors is None:
        raise ValueError("heat kernel diagonal needs eigenvectors")
    return (spectrum.eigenvectors ** 2) @ np.exp(-t * spectrum.eigenvalues)


@dataclass(frozen=True, eq=False)
class DistributionFunction:
    """Left-continuous step function with jumps at ``jump_points``.

    ``multiplicities`` counts the eigenvalues at each jump; the value at λ is
    the weight strictly below λ.
    """

    jump_points: np.ndarray
    multiplicities: np.ndarray
    volume: int

    @classmethod
    def from_spectrum(cls, spectrum: Spectrum) -> "DistributionFunction":
        points, counts = np.unique(spectrum.eigenvalues, return_counts=True)
        return cls(points, counts, spectrum.volume)

    @property
    def cumulative(self) -> np.ndarray:
        """Value just to the right of each jump point."""
        return np.cumsum(self.multiplicities) / self.volume

    def __call__(self, lam: float) -> float:
        idx = int(np.searchsorted(self.jump_points, lam, side="left"))
        return float(np.sum(self.multiplicities[:idx])) / self.volume

    def evaluate(self, grid: Sequence[float]) -> np.ndarray:
        idx = np.searchsorted(self.jump_points, np.asarray(grid, dtype=float), side="left")
        totals = np.concatenate([[0], np.cumsum(self.multiplicities)])
        return totals[idx] / self.volume

    def laplace_transform(self, t: float) -> float:
        """∫ e^{-tλ} dN(λ), summed over the jump multiset."""
        _check_time(t)
        terms = []
        for point, count in zip(self.jump_points, self.multiplicities):
            terms.extend([math.exp(-t * float(point))] * int(count))
        return math.fsum(terms) / self.volume

    def csv_rows(self) -> List[Tuple[float, float]]:
        """(λ, N(λ+)) at each jump point."""
        return [(float(p), float(c)) for p, c in zip(self.jump_points, self.cumulative)]


@dataclass(frozen=True)
class HeatTraceCurve:
    """Normalized heat traces over a t grid."""

    t_grid: Tuple[float, ...]
    values: Tuple[float, ...]

    @classmethod
    def from_spectrum(cls, spectrum: Spectrum, t_grid: Sequence[float]) -> "HeatTraceCurve":
        grid = tuple(float(t) for t in t_grid)
        return cls(grid, tuple(heat_trace(spectrum, t) for t in grid))
