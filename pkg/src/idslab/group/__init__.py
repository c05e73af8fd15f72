"""Groups, Cayley balls and Γ-periodic graphs."""

from .elements import (
    AbelianLatticeLaw,
    ElementSet,
    GroupElement,
    GroupFamily,
    GroupLaw,
    GroupSpec,
    HeisenbergLaw,
    ball,
    ball_sizes,
    clear_ball_cache,
    get_group_law,
    growth_exponent,
    inverse,
    multiply,
    register_group_law,
    word_norm,
)
from .graph import (
    InterEdge,
    PeriodicGraph,
    Vertex,
    VertexSet,
    bfs_layers,
    graph_distance,
    inscribed_radius,
    metric_ball,
    neighbours,
    phi,
)

__all__ = [
    "AbelianLatticeLaw",
    "ElementSet",
    "GroupElement",
    "GroupFamily",
    "GroupLaw",
    "GroupSpec",
    "HeisenbergLaw",
    "ball",
    "ball_sizes",
    "clear_ball_cache",
    "get_group_law",
    "growth_exponent",
    "inverse",
    "multiply",
    "register_group_law",
    "word_norm",
    "InterEdge",
    "PeriodicGraph",
    "Vertex",
    "VertexSet",
    "bfs_layers",
    "graph_distance",
    "inscribed_radius",
    "metric_ball",
    "neighbours",
    "phi",
]
