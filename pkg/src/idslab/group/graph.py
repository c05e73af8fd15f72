"""Γ-periodic graphs X = Γ × F and finite vertex sets in them."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from ..config import get_settings
from ..errors import GroupMismatchError
from .elements import FIBER_BITS, ElementSet, GroupElement, GroupSpec, inverse, word_norm

logger = logging.getLogger(__name__)

MAX_FIBER_SIZE = 1 << FIBER_BITS
_FIBER_MASK = np.int64(MAX_FIBER_SIZE - 1)


class Vertex(NamedTuple):
    """Vertex (γ, i) of the periodic graph."""

    element: GroupElement
    fiber: int = 0


class InterEdge(NamedTuple):
    """Edge pattern (e, source) ~ (generator, target), repeated along Γ."""

    generator: GroupElement
    source: int
    target: int


@dataclass(frozen=True)
class PeriodicGraph:
    """Γ-equivariant graph on Γ × F.

    Edge (γ, i) ~ (γs, j) exists exactly when (e, i) ~ (s, j) is listed in
    ``inter_edges`` (or s = e and {i, j} is an intra-fiber edge).
    """

    group: GroupSpec
    fiber_size: int = 1
    intra_edges: Tuple[Tuple[int, int], ...] = ()
    inter_edges: Tuple[InterEdge, ...] = field(default=())

    def __post_init__(self) -> None:
        if not 1 <= self.fiber_size <= MAX_FIBER_SIZE:
            raise ValueError(f"fiber size must be in [1, {MAX_FIBER_SIZE}], got {self.fiber_size}")

        intra = set()
        for i, j in self.intra_edges:
            self._check_fiber(i)
            self._check_fiber(j)
            if i == j:
                raise ValueError(f"intra-fiber self loop at {i}")
            intra.add((min(i, j), max(i, j)))
        object.__setattr__(self, "intra_edges", tuple(sorted(intra)))

        inter = set()
        for edge in self.inter_edges:
            edge = InterEdge(*edge)
            self.group.check_element(edge.generator)
            self._check_fiber(edge.source)
            self._check_fiber(edge.target)
            if edge.generator == self.group.identity and edge.source == edge.target:
                raise ValueError("inter-fiber edge with identity generator forms a self loop")
            inter.add(edge)
        object.__setattr__(self, "inter_edges", tuple(sorted(inter)))

    def _check_fiber(self, i: int) -> None:
        if not 0 <= i < self.fiber_size:
            raise ValueError(f"fiber index {i} outside [0, {self.fiber_size})")

    @classmethod
    def cayley(cls, spec: GroupSpec) -> "PeriodicGraph":
        """Cayley graph of (Γ, E): m = 1, edges γ ~ γs for s ∈ E \\ {e}."""
        edges = tuple(InterEdge(s, 0, 0) for s in spec.generators if s != spec.identity)
        return cls(spec, 1, (), edges)

    @cached_property
    def neighbour_rules(self) -> Dict[int, Tuple[Tuple[Tuple[int, ...], int], ...]]:
        """Per fiber i, the (offset, fiber) pairs with (γ,i) ~ (γ·offset, fiber)."""
        rules: Dict[int, set] = {i: set() for i in range(self.fiber_size)}
        identity = self.group.identity.coords
        for i, j in self.intra_edges:
            rules[i].add((identity, j))
            rules[j].add((identity, i))
        for edge in self.inter_edges:
            rules[edge.source].add((edge.generator.coords, edge.target))
            rules[edge.target].add((inverse(edge.generator).coords, edge.source))
        return {i: tuple(sorted(r)) for i, r in rules.items()}

    def degree(self, fiber: int) -> int:
        self._check_fiber(fiber)
        return len(self.neighbour_rules[fiber])

    @property
    def max_degree(self) -> int:
        return max(self.degree(i) for i in range(self.fiber_size))

    @property
    def max_hop(self) -> int:
        """Largest word norm of an inter-edge generator."""
        norms = [word_norm(self.group, e.generator) for e in self.inter_edges]
        return max(norms, default=0)

    # Vertex key codec

    def vertex_keys(self, vertices: Iterable[Vertex]) -> np.ndarray:
        vertices = list(vertices)
        for v in vertices:
            self.group.check_element(v.element)
            self._check_fiber(v.fiber)
        coords = np.array([v.element.coords for v in vertices], dtype=np.int64)
        fibers = np.array([v.fiber for v in vertices], dtype=np.int64)
        return self.compose_keys(self.group.encode(coords.reshape(-1, self.group.rank)), fibers)

    @staticmethod
    def compose_keys(element_keys: np.ndarray, fibers: np.ndarray) -> np.ndarray:
        return (np.asarray(element_keys, dtype=np.int64) << np.int64(FIBER_BITS)) | np.asarray(
            fibers, dtype=np.int64
        )

    @staticmethod
    def split_keys(keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        keys = np.asarray(keys, dtype=np.int64)
        return keys >> np.int64(FIBER_BITS), keys & _FIBER_MASK

    def vertex(self, key: int) -> Vertex:
        element_key, fiber = self.split_keys(np.asarray([key]))
        coords = self.group.decode(element_key)[0]
        return Vertex(GroupElement(tuple(int(c) for c in coords), self.group.family), int(fiber[0]))

    def adjacency_pairs(self, keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """All ambient edges leaving ``keys``.

        Returns:
            (source positions into ``keys``, neighbour vertex keys)
        """
        keys = np.asarray(keys, dtype=np.int64)
        element_keys, fibers = self.split_keys(keys)
        coords = self.group.decode(element_keys)
        law = self.group.law
        sources: List[np.ndarray] = []
        targets: List[np.ndarray] = []
        for fiber in np.unique(fibers):
            idx = np.nonzero(fibers == fiber)[0]
            block = coords[idx]
            for offset, target in self.neighbour_rules[int(fiber)]:
                moved = law.multiply(block, np.asarray(offset, dtype=np.int64))
                nbr = self.compose_keys(self.group.encode(moved), np.full(idx.shape, target))
                sources.append(idx)
                targets.append(nbr)
        if not sources:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        return np.concatenate(sources), np.concatenate(targets)


def _frozen(keys: np.ndarray) -> np.ndarray:
    keys.setflags(write=False)
    return keys


@dataclass(frozen=True, eq=False)
class VertexSet:
    """Finite vertex set D ⊂ X held as sorted unique vertex keys."""

    graph: PeriodicGraph
    keys: np.ndarray

    @classmethod
    def from_keys(cls, graph: PeriodicGraph, keys: np.ndarray) -> "VertexSet":
        return cls(graph, _frozen(np.unique(np.asarray(keys, dtype=np.int64))))

    @classmethod
    def from_vertices(cls, graph: PeriodicGraph, vertices: Iterable[Vertex]) -> "VertexSet":
        return cls.from_keys(graph, graph.vertex_keys(vertices))

    @classmethod
    def empty(cls, graph: PeriodicGraph) -> "VertexSet":
        return cls(graph, _frozen(np.empty(0, dtype=np.int64)))

    @property
    def size(self) -> int:
        return int(self.keys.shape[0])

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Vertex]:
        element_keys, fibers = PeriodicGraph.split_keys(self.keys)
        coords = self.graph.group.decode(element_keys)
        family = self.graph.group.family
        for row, fiber in zip(coords, fibers):
            yield Vertex(GroupElement(tuple(int(c) for c in row), family), int(fiber))

    def __contains__(self, v: object) -> bool:
        if not isinstance(v, Vertex):
            return False
        key = self.graph.vertex_keys([v])[0]
        return bool(self.contains_keys(np.asarray([key]))[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.graph == other.graph and np.array_equal(self.keys, other.keys)

    def contains_keys(self, keys: np.ndarray) -> np.ndarray:
        return np.isin(np.asarray(keys, dtype=np.int64), self.keys)

    def index_of(self, keys: np.ndarray) -> np.ndarray:
        """Positions of ``keys`` (which must be members) in sorted order."""
        return np.searchsorted(self.keys, np.asarray(keys, dtype=np.int64))

    def _check(self, other: "VertexSet") -> None:
        if self.graph != other.graph:
            raise GroupMismatchError("vertex sets live on different graphs")

    def union(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.graph, _frozen(np.union1d(self.keys, other.keys)))

    def intersection(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        keys = np.intersect1d(self.keys, other.keys, assume_unique=True)
        return VertexSet(self.graph, _frozen(keys))

    def difference(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        keys = np.setdiff1d(self.keys, other.keys, assume_unique=True)
        return VertexSet(self.graph, _frozen(keys))

    def symmetric_difference(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        keys = np.setxor1d(self.keys, other.keys, assume_unique=True)
        return VertexSet(self.graph, _frozen(keys))

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference

    def issubset(self, other: "VertexSet") -> bool:
        self._check(other)
        return bool(np.isin(self.keys, other.keys, assume_unique=True).all())

    def elements(self) -> ElementSet:
        """Distinct group elements carrying at least one vertex of the set."""
        element_keys, _ = PeriodicGraph.split_keys(self.keys)
        return ElementSet.from_keys(self.graph.group, element_keys)

    def translate(self, g: GroupElement) -> "VertexSet":
        """γD = {(γη, i) : (η, i) ∈ D}."""
        group = self.graph.group
        group.check_element(g)
        element_keys, fibers = PeriodicGraph.split_keys(self.keys)
        moved = group.law.multiply(np.asarray(g.coords, dtype=np.int64), group.decode(element_keys))
        keys = PeriodicGraph.compose_keys(group.encode(moved), fibers)
        return VertexSet.from_keys(self.graph, keys)

    def to_lines(self) -> List[str]:
        """One "c1 c2 ... fiber" line per vertex, in key order."""
        return [" ".join(str(c) for c in v.element.coords) + f" {v.fiber}" for v in self]

    @classmethod
    def from_lines(cls, graph: PeriodicGraph, lines: Iterable[str]) -> "VertexSet":
        vertices = []
        for line in lines:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != graph.group.rank + 1:
                raise ValueError(f"malformed vertex line: {line!r}")
            values = [int(p) for p in parts]
            element = GroupElement(tuple(values[:-1]), graph.group.family)
            vertices.append(Vertex(element, values[-1]))
        return cls.from_vertices(graph, vertices)


def phi(index_set: ElementSet, graph: PeriodicGraph) -> VertexSet:
    """φ(I) = I × F."""
    if len(index_set) == 0:
        raise ValueError("phi needs a non-empty index set")
    if index_set.spec != graph.group:
        raise GroupMismatchError("index set and graph use different groups")
    fibers = np.arange(graph.fiber_size, dtype=np.int64)
    keys = PeriodicGraph.compose_keys(index_set.keys[:, None], fibers[None, :]).ravel()
    return VertexSet(graph, _frozen(keys))


def neighbours(vertex_set: VertexSet) -> VertexSet:
    """All ambient neighbours of members of the set (members included if adjacent)."""
    _, nbrs = vertex_set.graph.adjacency_pairs(vertex_set.keys)
    return VertexSet.from_keys(vertex_set.graph, nbrs)


def bfs_layers(
    sources: VertexSet, depth: int, window: Optional[VertexSet] = None
) -> List[np.ndarray]:
    """Distance layers from ``sources``: layer k holds vertices at distance exactly k.

    Args:
        sources: Layer 0
        depth: Deepest layer to compute
        window: When given, the walk stays inside this set

    Returns:
        Sorted key arrays, stopping early once no new vertex is reached
    """
    graph = sources.graph
    current = sources.keys if window is None else np.intersect1d(sources.keys, window.keys)
    layers = [current]
    visited = current
    for _ in range(depth):
        _, nbrs = graph.adjacency_pairs(current)
        nbrs = np.unique(nbrs)
        if window is not None:
            nbrs = nbrs[np.isin(nbrs, window.keys, assume_unique=True)]
        fresh = np.setdiff1d(nbrs, visited, assume_unique=True)
        if fresh.size == 0:
            break
        layers.append(fresh)
        visited = np.union1d(visited, fresh)
        current = fresh
    return layers


def graph_distance(
    graph: PeriodicGraph, v: Vertex, w: Vertex, max_depth: Optional[int] = None
) -> Optional[int]:
    """BFS distance between two vertices; None when w is unreachable from v.

    Layers are expanded one at a time and the walk stops at the first layer
    holding ``w``.
    """
    if v == w:
        return 0
    depth = get_settings().max_bfs_depth if max_depth is None else max_depth
    target = graph.vertex_keys([w])[0]
    current = graph.vertex_keys([v])
    visited = current
    for k in range(1, depth + 1):
        _, nbrs = graph.adjacency_pairs(current)
        fresh = np.setdiff1d(np.unique(nbrs), visited, assume_unique=True)
        if fresh.size == 0:
            return None
        if np.isin(target, fresh):
            return k
        visited = np.union1d(visited, fresh)
        current = fresh
    logger.debug(f"[GROUP] {w} not reached from {v} within depth {depth}")
    return None


def metric_ball(graph: PeriodicGraph, center: Vertex, radius: int) -> VertexSet:
    """B_r(p) = {x : d(x, p) ≤ r}."""
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    layers = bfs_layers(VertexSet.from_vertices(graph, [center]), radius)
    return VertexSet.from_keys(graph, np.concatenate(layers))


def inscribed_radius(domain: VertexSet) -> int:
    """Largest r such that some metric ball B_r(p) lies inside the domain (-1 if empty)."""
    if domain.size == 0:
        return -1
    outside = neighbours(domain) - domain
    if outside.size == 0:
        # Finite sets in an infinite graph always have outer neighbours.
        raise ValueError("domain has no outer boundary")
    depth = get_settings().max_bfs_depth
    region = domain | outside
    layers = bfs_layers(outside, depth, window=region)
    return len(layers) - 2
