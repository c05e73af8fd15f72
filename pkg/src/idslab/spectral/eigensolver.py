"""Symmetric eigensolver: Householder tridiagonalization and implicit QL.

The QL stage follows the classic tqli scheme with Wilkinson-type shifts and
Givens rotations, applied to plain Python floats for speed on the sequential
inner loop.
"""

import logging
import math
import sys
from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from ..config import get_settings
from ..errors import DenseDimensionError, EigenSolverConvergenceError, NumericalError
from ..operator import DirichletMatrix

logger = logging.getLogger(__name__)

Method = Literal["ql", "lapack"]
MatrixLike = Union[DirichletMatrix, np.ndarray]


@dataclass(frozen=True)
class Tridiagonal:
    """T = Qᵀ A Q with diagonal d and sub-diagonal e."""

    diagonal: np.ndarray
    offdiagonal: np.ndarray
    basis: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues and, optionally, orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.eigenvalues.setflags(write=False)
        if self.eigenvectors is not None:
            self.eigenvectors.setflags(write=False)

    @property
    def volume(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def has_vectors(self) -> bool:
        return self.eigenvectors is not None

    def csv_rows(self) -> List[Tuple[int, float]]:
        return [(i, float(v)) for i, v in enumerate(self.eigenvalues)]


def _as_dense(matrix: MatrixLike, max_dense_dimension: Optional[int] = None) -> np.ndarray:
    if isinstance(matrix, DirichletMatrix):
        limit = max_dense_dimension or get_settings().max_dense_dimension
        if matrix.dimension > limit:
            raise DenseDimensionError(matrix.dimension, limit)
        return matrix.dense()
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def tridiagonalize(
    matrix: MatrixLike, want_basis: bool = False, max_dense_dimension: Optional[int] = None
) -> Tridiagonal:
    """Householder reduction A = Q T Qᵀ.

    Columns that are already reduced are skipped, so tridiagonal input costs
    only a scan. Other Dirichlet matrices are densified, which is refused above
    ``max_dense_dimension`` (the configured limit by default).
    """
    if isinstance(matrix, DirichletMatrix) and matrix.is_tridiagonal:
        n = matrix.dimension
        off = np.zeros(max(n - 1, 0))
        off[matrix.rows[matrix.rows > matrix.cols] - 1] = -1.0
        basis = np.eye(n) if want_basis else None
        return Tridiagonal(matrix.diagonal.astype(float).copy(), off, basis)

    a = _as_dense(matrix, max_dense_dimension)
    n = a.shape[0]
    q = np.eye(n) if want_basis else None
    for k in range(n - 2):
        x = a[k + 1 :, k]
        if not np.any(x[1:]):
            continue
        norm_x = float(np.linalg.norm(x))
        alpha = -math.copysign(norm_x, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        a[k + 1 :, k:] -= 2.0 * np.outer(v, v @ a[k + 1 :, k:])
        a[k:, k + 1 :] -= 2.0 * np.outer(a[k:, k + 1 :] @ v, v)
        if q is not None:
            q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ v, v)
    return Tridiagonal(np.diag(a).copy(), np.diag(a, -1).copy(), q)


def _implicit_ql(
    d: List[float], e: List[float], z: Optional[np.ndarray], cap: int
) -> None:
    """In-place tqli on diagonal ``d`` and sub-diagonal ``e`` (padded to length n).

    Rotations act on rows of ``z``, which holds the basis vectors as rows.
    """
    n = len(d)
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if iterations == cap:
                raise EigenSolverConvergenceError(l, iterations)
            iterations += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    upper = z[i].copy()
                    z[i] = c * upper - s * z[i + 1]
                    z[i + 1] = s * upper + c * z[i + 1]
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def eigenvalues(
    matrix: MatrixLike,
    want_vectors: bool = False,
    method: Method = "ql",
    max_dense_dimension: Optional[int] = None,
) -> Spectrum:
    """Full spectrum of a symmetric matrix, sorted ascending.

    Args:
        matrix: Dirichlet matrix or dense symmetric array
        want_vectors: Also return orthonormal eigenvectors (columns)
        method: "ql" (Householder + implicit QL) or "lapack" (scipy.linalg.eigh)
        max_dense_dimension: Dense storage limit, the configured one by default

    Returns:
        Spectrum with ascending eigenvalues

    Raises:
        EigenSolverConvergenceError: QL exceeded the per-eigenvalue sweep cap
        DenseDimensionError: the matrix would have to be densified above the limit
    """
    if method == "lapack":
        a = _as_dense(matrix, max_dense_dimension)
        if want_vectors:
            values, vectors = linalg.eigh(a)
            return Spectrum(np.ascontiguousarray(values), np.ascontiguousarray(vectors))
        return Spectrum(np.ascontiguousarray(linalg.eigh(a, eigvals_only=True)))
    if method != "ql":
        raise ValueError(f"unknown eigensolver method '{method}'")

    tri = tridiagonalize(matrix, want_vectors, max_dense_dimension)
    n = tri.diagonal.shape[0]
    d = [float(v) for v in tri.diagonal]
    e = [float(v) for v in tri.offdiagonal] + [0.0]
    z = np.ascontiguousarray(tri.basis.T) if tri.basis is not None else None
    _implicit_ql(d, e, z, get_settings().ql_iteration_cap)

    values = np.asarray(d, dtype=float)
    order = np.argsort(values, kind="stable")
    vectors = None
    if z is not None:
        vectors = np.ascontiguousarray(z[order].T)
    logger.debug(f"[SPECTRAL] solved n={n} (vectors={want_vectors})")
    return Spectrum(values[order], vectors)


def sturm_count(matrix: MatrixLike, lam: float, max_retries: int = 8) -> int:
    """Number of eigenvalues strictly below ``lam`` by LDLᵀ pivot signs of T − λI.

    An exact zero pivot means λ is (numerically) an eigenvalue; λ is then moved
    down by a machine-scale amount and the count repeated.
    """
    tri = tridiagonalize(matrix)
    d = [float(v) for v in tri.diagonal]
    e2 = [float(v) * float(v) for v in tri.offdiagonal]
    n = len(d)
    if n == 0:
        return 0
    scale = max(max(abs(v) for v in d), max((math.sqrt(v) for v in e2), default=0.0), 1.0)
    shift = lam
    for attempt in range(max_retries + 1):
        count = 0
        q = d[0] - shift
        breakdown = q == 0.0
        if q < 0:
            count += 1
        for i in range(1, n):
            if breakdown:
                break
            q = (d[i] - shift) - e2[i - 1] / q
            if q == 0.0:
                breakdown = True
            elif q < 0:
                count += 1
        if not breakdown:
            if attempt:
                logger.warning(
                    f"[SPECTRAL] Sturm count at λ={lam} needed {attempt} jitter retries"
                )
            return count
        shift = lam - scale * sys.float_info.epsilon * (4 ** (attempt + 1))
    raise NumericalError(f"Sturm count at λ={lam} hit zero pivots in {max_retries} retries")
