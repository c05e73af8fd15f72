"""Chebyshev expansion of e^{-tH}: stochastic heat traces and heat actions.

With the spectrum inside [lo, hi], α = (hi − lo)/2 and β = (hi + lo)/2,

    e^{-tλ} = e^{-t·lo} Σ_k (2 − δ_k0) (−1)^k ive(k, tα) T_k((λ − β)/α)

where ive is the exponentially scaled modified Bessel function.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special

from ..errors import ChebyshevTruncationError
from ..operator import DirichletMatrix

logger = logging.getLogger(__name__)

MAX_DEGREE = 100_000


@dataclass(frozen=True)
class ChebyshevEstimate:
    """Stochastic trace estimate with its standard error."""

    value: float
    standard_error: float
    degree: int
    truncation_bound: float
    probes: int


def chebyshev_coefficients(t: float, lo: float, hi: float, degree: int) -> np.ndarray:
    """Coefficients c_0..c_degree of e^{-tλ} on [lo, hi]."""
    alpha = 0.5 * (hi - lo)
    k = np.arange(degree + 1)
    coeffs = 2.0 * special.ive(k, t * alpha) * np.where(k % 2 == 0, 1.0, -1.0)
    coeffs[0] *= 0.5
    return math.exp(-t * lo) * coeffs


def truncation_bound(t: float, lo: float, hi: float, degree: int) -> float:
    """Upper bound on sup |e^{-tλ} − p_degree(λ)| over [lo, hi].

    Uses I_k(z) ≤ (z/2)^k/k! · I_0(z) and a geometric tail.
    """
    z = t * 0.5 * (hi - lo)
    half = 0.5 * z
    if half >= degree + 2:
        return math.inf
    if half == 0.0:
        return 0.0
    log_first = (degree + 1) * math.log(half) - math.lgamma(degree + 2)
    tail = math.exp(log_first) / (1.0 - half / (degree + 2))
    return 2.0 * math.exp(-t * lo) * float(special.i0e(z)) * tail


def chebyshev_degree(t: float, lo: float, hi: float, tolerance: float) -> int:
    """Smallest degree whose truncation bound is within ``tolerance``."""
    degree = max(int(math.ceil(t * 0.5 * (hi - lo))), 1)
    while truncation_bound(t, lo, hi, degree) > tolerance:
        degree = degree * 2 if degree < 64 else degree + 32
        if degree > MAX_DEGREE:
            raise ChebyshevTruncationError(degree, truncation_bound(t, lo, hi, degree), tolerance)
    return degree


def _spectral_window(matrix: DirichletMatrix) -> Tuple[float, float]:
    lo, hi = matrix.gershgorin_bounds()
    if hi - lo < 1e-12:
        hi = lo + 1e-12
    return lo, hi


def _apply_series(
    matrix: DirichletMatrix, coeffs: np.ndarray, lo: float, hi: float, vectors: np.ndarray
) -> np.ndarray:
    """Σ c_k T_k(H̃) V by the three-term recurrence."""
    op = matrix.operator()
    alpha = 0.5 * (hi - lo)
    beta = 0.5 * (hi + lo)

    def scaled(x: np.ndarray) -> np.ndarray:
        return (op @ x - beta * x) / alpha

    previous = vectors
    result = coeffs[0] * previous
    if coeffs.shape[0] == 1:
        return result
    current = scaled(vectors)
    result = result + coeffs[1] * current
    for c in coeffs[2:]:
        previous, current = current, 2.0 * scaled(current) - previous
        result = result + c * current
    return result


def chebyshev_heat_action(
    matrix: DirichletMatrix,
    t: float,
    vectors: np.ndarray,
    degree: Optional[int] = None,
    tolerance: float = 1e-12,
) -> np.ndarray:
    """e^{-tH}·V by a truncated Chebyshev series.

    Raises:
        ChebyshevTruncationError: the given degree cannot meet ``tolerance``
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    vectors = np.asarray(vectors, dtype=float)
    if t == 0:
        return vectors.copy()
    lo, hi = _spectral_window(matrix)
    if degree is None:
        degree = chebyshev_degree(t, lo, hi, tolerance)
    bound = truncation_bound(t, lo, hi, degree)
    if bound > tolerance:
        raise ChebyshevTruncationError(degree, bound, tolerance)
    return _apply_series(matrix, chebyshev_coefficients(t, lo, hi, degree), lo, hi, vectors)


def chebyshev_heat_trace(
    matrix: DirichletMatrix,
    t: float,
    probes: int,
    degree: int,
    rng: np.random.Generator,
    tolerance: float = 1e-8,
) -> ChebyshevEstimate:
    """Hutchinson estimate of (1/n) Tr e^{-tH} with Rademacher probes.

    Args:
        matrix: Operator (dense or sparse storage)
        t: Time, t = 0 returns exactly 1
        probes: Number of probe vectors, at least 2 for an error estimate
        degree: Chebyshev degree
        rng: Seeded generator for the probes
        tolerance: Largest acceptable truncation bound

    Returns:
        Estimate with standard error over probes
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return ChebyshevEstimate(1.0, 0.0, 0, 0.0, probes)
    if probes < 1:
        raise ValueError("need at least one probe")
    lo, hi = _spectral_window(matrix)
    bound = truncation_bound(t, lo, hi, degree)
    if bound > tolerance:
        raise ChebyshevTruncationError(degree, bound, tolerance)

    n = matrix.dimension
    z = rng.choice(np.array([-1.0, 1.0]), size=(n, probes))
    fz = _apply_series(matrix, chebyshev_coefficients(t, lo, hi, degree), lo, hi, z)
    samples = np.einsum("ij,ij->j", z, fz) / n
    value = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(probes)) if probes > 1 else math.inf
    logger.debug(
        f"[SPECTRAL] Chebyshev trace n={n} t={t} degree={degree}: {value:.6g} ± {stderr:.2g}"
    )
    return ChebyshevEstimate(value, stderr, degree, bound, probes)
