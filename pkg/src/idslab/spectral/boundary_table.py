"""Empirical h(t, ε) table for the principle of not feeling the boundary."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..environment import EnvironmentSample, SingleSitePotential
from ..group import PeriodicGraph, Vertex, metric_ball
from ..operator import assemble_dirichlet
from .chebyshev import chebyshev_heat_action

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryTable:
    """Rows (t, h, gap) with gap = |k_{D'}(t,x,x) − k_{B_h(x)}(t,x,x)|."""

    epsilon: float
    rows: Tuple[Tuple[float, int, float], ...]
    h_of_t: Dict[float, Optional[int]] = field(default_factory=dict)

    def gaps(self, t: float) -> List[float]:
        return [gap for s, _, gap in self.rows if s == t]

    def required_pad(self, t: float) -> Optional[int]:
        """Measured h(t, ε), or None when ε was not reached."""
        return self.h_of_t.get(float(t))

    def csv_rows(self) -> List[Tuple[float, int, float]]:
        return list(self.rows)


def heat_diagonal_at(
    graph: PeriodicGraph,
    center: Vertex,
    radius: int,
    t: float,
    omega: Optional[EnvironmentSample] = None,
    potential: Optional[SingleSitePotential] = None,
    tolerance: float = 1e-14,
) -> float:
    """k_D(t, p, p) for D = B_radius(p)."""
    domain = metric_ball(graph, center, radius)
    matrix = assemble_dirichlet(domain, omega, potential)
    x = matrix.vertex_index(center)
    unit = np.zeros(matrix.dimension)
    unit[x] = 1.0
    return float(chebyshev_heat_action(matrix, t, unit, tolerance=tolerance)[x])


def boundary_sensitivity_table(
    graph: PeriodicGraph,
    t_grid: Sequence[float],
    max_depth: int,
    epsilon: float,
    center: Optional[Vertex] = None,
    reference_radius: Optional[int] = None,
    omega: Optional[EnvironmentSample] = None,
    potential: Optional[SingleSitePotential] = None,
) -> BoundaryTable:
    """Measure how fast restricted heat-kernel diagonals stop feeling the boundary.

    Args:
        graph: Periodic graph
        t_grid: Times to tabulate
        max_depth: Largest collar depth h (ball radius around the centre)
        epsilon: Gap threshold defining h(t, ε)
        center: Base vertex, (e, 0) by default
        reference_radius: Radius of the enclosing domain D'
        omega: Optional environment (V = 0 otherwise)
        potential: Optional single-site profile

    Returns:
        The table and the smallest h per t with gap ≤ ε
    """
    if max_depth < 0:
        raise ValueError(f"max_depth must be non-negative, got {max_depth}")
    center = center or Vertex(graph.group.identity, 0)
    reference_radius = reference_radius or 2 * max_depth + 10
    rows: List[Tuple[float, int, float]] = []
    h_of_t: Dict[float, Optional[int]] = {}
    for t in t_grid:
        t = float(t)
        reference = heat_diagonal_at(graph, center, reference_radius, t, omega, potential)
        h_of_t[t] = None
        for h in range(max_depth + 1):
            gap = abs(reference - heat_diagonal_at(graph, center, h, t, omega, potential))
            rows.append((t, h, gap))
            if h_of_t[t] is None and gap <= epsilon:
                h_of_t[t] = h
        logger.info(f"[SPECTRAL] h(t={t}, ε={epsilon}) = {h_of_t[t]}")
    return BoundaryTable(epsilon, tuple(rows), h_of_t)
