"""Vertex boundaries, h-boundaries and h-approximations.

The boundary of D is two-sided: it holds every vertex with a neighbour of the
opposite membership, so ∂D ∩ D is the inner collar and ∂D \\ D the outer one.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..group import VertexSet, bfs_layers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryScan:
    """Result of a boundary computation, possibly restricted to a window."""

    boundary: VertexSet
    window_limited: bool = False


def topological_boundary(domain: VertexSet, window: Optional[VertexSet] = None) -> BoundaryScan:
    """∂D: vertices joined by an edge to a vertex of opposite membership.

    Args:
        domain: Finite vertex set D
        window: When given, only cut edges with both ends in the window count

    Returns:
        The boundary and whether cut edges leaving the window were ignored
    """
    graph = domain.graph
    sources, targets = graph.adjacency_pairs(domain.keys)
    cut = ~np.isin(targets, domain.keys)
    window_limited = False
    if window is not None:
        in_window = np.isin(targets, window.keys)
        window_limited = bool((cut & ~in_window).any())
        cut &= in_window
        if window_limited:
            logger.warning(
                f"[FOLNER] boundary of a {domain.size}-vertex set "
                "is cut off by the computation window"
            )
    inner = domain.keys[np.unique(sources[cut])]
    outer = np.unique(targets[cut])
    boundary = VertexSet.from_keys(graph, np.concatenate([inner, outer]))
    return BoundaryScan(boundary, window_limited)


def scan_h_boundary(domain: VertexSet, h: int, window: Optional[VertexSet] = None) -> BoundaryScan:
    """∂_h D = {x : d(x, ∂D) ≤ h} by BFS layering from ∂D."""
    if h < 0:
        raise ValueError(f"h must be non-negative, got {h}")
    scan = topological_boundary(domain, window)
    if scan.boundary.size == 0 or h == 0:
        return scan
    layers = bfs_layers(scan.boundary, h, window=window)
    boundary = VertexSet.from_keys(domain.graph, np.concatenate(layers))
    return BoundaryScan(boundary, scan.window_limited)


def h_boundary(domain: VertexSet, h: int) -> VertexSet:
    """∂_h D in the ambient graph."""
    return scan_h_boundary(domain, h).boundary


def isoperimetric_quotient(domain: VertexSet, d: int) -> Fraction:
    """|∂_d D| / |D|, exactly."""
    if domain.size == 0:
        raise ValueError("isoperimetric quotient of an empty set is undefined")
    return Fraction(h_boundary(domain, d).size, domain.size)


def h_approximate(
    domain: VertexSet,
    h: int,
    rng: np.random.Generator,
    toggle_probability: float = 0.5,
) -> VertexSet:
    """Random h-approximation V of U: membership toggled at random inside ∂_h U.

    Args:
        domain: The set U
        h: Collar depth, at least 1
        rng: Seeded generator; one uniform draw per collar vertex in key order
        toggle_probability: Chance that a collar vertex changes membership

    Returns:
        V with U Δ V ⊆ ∂_h U
    """
    if h < 1:
        raise ValueError(f"h must be at least 1, got {h}")
    if not 0.0 <= toggle_probability <= 1.0:
        raise ValueError(f"toggle probability must be in [0, 1], got {toggle_probability}")
    collar = h_boundary(domain, h)
    flips = rng.random(collar.size) < toggle_probability
    toggled = VertexSet.from_keys(domain.graph, collar.keys[flips])
    return domain ^ toggled


def strip_inner_collar(domain: VertexSet, h: int) -> VertexSet:
    """U \\ ∂_h U, the deterministic h-approximation."""
    return domain - h_boundary(domain, h)


def isoperimetric_transfer_bound(domain: VertexSet, h: int, d: int) -> Optional[Fraction]:
    """Upper bound on |∂_d V|/|V| valid for every h-approximation V of U.

    A cut edge of V has an end in ∂_h U or next to it, so ∂_d V ⊆ ∂_{h+d+1} U,
    while |V| ≥ |U \\ ∂_h U|. Returns None when U \\ ∂_h U is empty.
    """
    interior = domain.size - (domain & h_boundary(domain, h)).size
    if interior == 0:
        return None
    return Fraction(h_boundary(domain, h + d + 1).size, interior)
