"""Dirichlet restrictions H^ω_D = (Δ + V^ω)|_D and the free heat-kernel oracle."""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from ..config import get_settings
from ..environment import EnvironmentSample, SingleSitePotential, potential_values
from ..group import Vertex, VertexSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DirichletMatrix:
    """Symmetric matrix of H^ω_D in coordinate form.

    Off-diagonal entries (i, j) are stored once per ordered pair, so ``rows``
    and ``cols`` list both (i, j) and (j, i).
    """

    domain: VertexSet
    diagonal: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    potential: np.ndarray
    degrees: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.diagonal.shape[0])

    @property
    def max_degree(self) -> int:
        return self.domain.graph.max_degree

    def vertex_index(self, vertex: Vertex) -> int:
        """Row of a vertex of D."""
        key = self.domain.graph.vertex_keys([vertex])[0]
        pos = int(np.searchsorted(self.domain.keys, key))
        if pos >= self.dimension or self.domain.keys[pos] != key:
            raise KeyError(f"{vertex} is not in the domain")
        return pos

    def dense(self) -> np.ndarray:
        out = np.diag(self.diagonal.astype(float))
        out[self.rows, self.cols] = -1.0
        return out

    def to_csr(self) -> sparse.csr_matrix:
        n = self.dimension
        diag_idx = np.arange(n)
        data = np.concatenate([self.diagonal.astype(float), -np.ones(self.rows.shape[0])])
        r = np.concatenate([diag_idx, self.rows])
        c = np.concatenate([diag_idx, self.cols])
        return sparse.csr_matrix((data, (r, c)), shape=(n, n))

    def operator(
        self, max_dense_dimension: Optional[int] = None
    ) -> Union[np.ndarray, sparse.csr_matrix]:
        """Dense storage up to the limit (the configured one by default), CSR above it."""
        limit = max_dense_dimension or get_settings().max_dense_dimension
        if self.dimension <= limit:
            return self.dense()
        return self.to_csr()

    @cached_property
    def is_tridiagonal(self) -> bool:
        return bool(np.all(np.abs(self.rows - self.cols) == 1))

    def to_triplets(self) -> List[Tuple[int, int, float]]:
        """Non-zero entries (i, j, value), sorted by (i, j)."""
        entries = [(i, i, float(v)) for i, v in enumerate(self.diagonal)]
        entries += [(int(i), int(j), -1.0) for i, j in zip(self.rows, self.cols)]
        return sorted(entries)

    def gershgorin_bounds(self) -> Tuple[float, float]:
        """Interval containing the spectrum."""
        radius = np.bincount(self.rows, minlength=self.dimension).astype(float)
        return float(np.min(self.diagonal - radius)), float(np.max(self.diagonal + radius))


def assemble_dirichlet(
    domain: VertexSet,
    omega: Optional[EnvironmentSample] = None,
    potential: Optional[SingleSitePotential] = None,
) -> DirichletMatrix:
    """Assemble H^ω_D with ambient degrees on the diagonal.

    Args:
        domain: Finite non-empty vertex set D
        omega: Environment sample; V = 0 when omitted
        potential: Single-site profile u; V = 0 when omitted

    Returns:
        The restricted operator in coordinate form
    """
    if domain.size == 0:
        raise ValueError("cannot assemble an operator on an empty domain")
    graph = domain.graph
    n = domain.size

    sources, targets = graph.adjacency_pairs(domain.keys)
    edges = np.unique(np.stack([sources, targets], axis=1), axis=0)
    sources, targets = edges[:, 0], edges[:, 1]
    degrees = np.bincount(sources, minlength=n)

    inside = np.isin(targets, domain.keys)
    rows = sources[inside]
    cols = domain.index_of(targets[inside])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]

    if omega is not None and potential is not None:
        values = potential_values(omega, potential, domain, graph)
    else:
        values = np.zeros(n, dtype=float)

    logger.debug(f"[OPERATOR] assembled n={n} with {rows.shape[0] // 2} interior edges")
    return DirichletMatrix(
        domain=domain,
        diagonal=degrees.astype(float) + values,
        rows=rows,
        cols=cols,
        potential=values,
        degrees=degrees,
    )


def free_heat_diagonal(t: float, dimension: int, tolerance: float = 1e-17) -> float:
    """k(t, x, x) = (e^{-2t} I₀(2t))^d for the standard ℤ^d lattice.

    The series e^{-2t} Σ t^{2k}/(k!)² is summed in log space; summation stops
    once the geometric tail bound drops below ``tolerance`` relative to the sum.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if dimension < 1:
        raise ValueError(f"dimension must be positive, got {dimension}")
    log_t = math.log(t)
    terms = []
    k = 0
    while True:
        term = math.exp(2 * k * log_t - 2 * math.lgamma(k + 1) - 2 * t)
        terms.append(term)
        ratio = t * t / ((k + 1) ** 2)
        if ratio < 1:
            tail = term * ratio / (1 - ratio)
            if tail <= tolerance * math.fsum(terms):
                break
        k += 1
    return math.fsum(terms) ** dimension
