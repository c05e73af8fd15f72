"""Tests for vertex boundaries, h-boundaries and h-approximations."""

from fractions import Fraction

import numpy as np
import pytest

from idslab.folner import (
    h_approximate,
    h_boundary,
    isoperimetric_quotient,
    isoperimetric_transfer_bound,
    scan_h_boundary,
    strip_inner_collar,
    topological_boundary,
)
from idslab.group import (
    ElementSet,
    GroupSpec,
    PeriodicGraph,
    Vertex,
    VertexSet,
    ball,
    graph_distance,
    metric_ball,
    neighbours,
    phi,
)


def interval(graph: PeriodicGraph, lo: int, hi: int) -> VertexSet:
    spec = graph.group
    return VertexSet.from_vertices(graph, (Vertex(spec.element(i)) for i in range(lo, hi + 1)))


def coords_of(vertex_set: VertexSet) -> list:
    return [v.element.coords[0] for v in vertex_set]


class TestBoundaries:
    """∂D and ∂_h D on intervals and squares."""

    def test_interval_boundary_is_two_sided(self, z1_graph: PeriodicGraph) -> None:
        scan = topological_boundary(interval(z1_graph, -10, 10))

        assert coords_of(scan.boundary) == [-11, -10, 10, 11]
        assert not scan.window_limited

    @pytest.mark.parametrize("h", [0, 1, 2, 5])
    def test_interval_h_boundary_size(self, z1_graph: PeriodicGraph, h: int) -> None:
        assert h_boundary(interval(z1_graph, -20, 20), h).size == 4 * h + 4

    def test_square_boundary(self, z2: GroupSpec, z2_graph: PeriodicGraph) -> None:
        coords = np.array([[x, y] for x in range(4) for y in range(4)])
        square = phi(ElementSet.from_coords(z2, coords), z2_graph)
        # 12 inner collar vertices and 16 outer ones
        assert topological_boundary(square).boundary.size == 28

    def test_window_cuts_boundary(self, z1_graph: PeriodicGraph) -> None:
        domain = interval(z1_graph, -3, 3)
        scan = topological_boundary(domain, window=interval(z1_graph, -4, 3))

        assert scan.window_limited
        assert coords_of(scan.boundary) == [-4, -3]

    def test_scan_with_large_window(self, z1_graph: PeriodicGraph) -> None:
        domain = interval(z1_graph, -3, 3)
        scan = scan_h_boundary(domain, 2, window=interval(z1_graph, -50, 50))

        assert not scan.window_limited
        assert scan.boundary == h_boundary(domain, 2)

    def test_negative_h(self, z1_graph: PeriodicGraph) -> None:
        with pytest.raises(ValueError):
            scan_h_boundary(interval(z1_graph, 0, 3), -1)

    def test_isoperimetric_quotient(self, z1_graph: PeriodicGraph) -> None:
        domain = interval(z1_graph, -10, 10)
        assert isoperimetric_quotient(domain, 0) == Fraction(4, 21)
        assert isoperimetric_quotient(domain, 1) == Fraction(8, 21)

    def test_boundary_is_translation_equivariant(self, heisenberg: GroupSpec) -> None:
        graph = PeriodicGraph.cayley(heisenberg)
        domain = phi(ball(heisenberg, 2), graph)
        gamma = heisenberg.element(3, -1, 2)

        moved = h_boundary(domain.translate(gamma), 1)

        assert moved == h_boundary(domain, 1).translate(gamma)


def random_subset(graph: PeriodicGraph, radius: int, seed: int) -> VertexSet:
    rng = np.random.default_rng(seed)
    region = phi(ball(graph.group, radius), graph)
    return VertexSet.from_keys(graph, region.keys[rng.random(region.size) < 0.6])


def on_boundary(x: Vertex, domain: VertexSet) -> bool:
    inside = x in domain
    adjacent = neighbours(VertexSet.from_vertices(domain.graph, [x]))
    return any((y in domain) != inside for y in adjacent)


class TestBoundaryDefinition:
    """∂D and ∂_h D recomputed vertex by vertex from their definitions."""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_boundary_matches_definition(self, z2_graph: PeriodicGraph, seed: int) -> None:
        domain = random_subset(z2_graph, 3, seed)
        window = metric_ball(z2_graph, Vertex(z2_graph.group.identity), 5)

        expected = {x for x in window if on_boundary(x, domain)}

        assert set(topological_boundary(domain).boundary) == expected

    @pytest.mark.parametrize("h", [0, 1, 2])
    def test_h_boundary_matches_definition(self, z2_graph: PeriodicGraph, h: int) -> None:
        domain = random_subset(z2_graph, 3, 4)
        boundary = list(topological_boundary(domain).boundary)
        window = metric_ball(z2_graph, Vertex(z2_graph.group.identity), 4 + h)

        expected = {
            x
            for x in window
            if any(graph_distance(z2_graph, x, b, h) is not None for b in boundary)
        }

        assert set(h_boundary(domain, h)) == expected
        assert set(scan_h_boundary(domain, h).boundary) == expected

    @pytest.mark.parametrize("group", ["z2", "heisenberg"])
    def test_h_boundary_grows_with_h(self, request: pytest.FixtureRequest, group: str) -> None:
        spec = request.getfixturevalue(group)
        graph = PeriodicGraph.cayley(spec)
        domain = random_subset(graph, 3, 5)

        layers = [h_boundary(domain, h) for h in range(6)]

        for inner, outer in zip(layers, layers[1:]):
            assert inner.issubset(outer)
            assert inner.size < outer.size


class TestApproximations:
    """h-approximations and the transfer bound."""

    def test_strip_inner_collar(self, z1_graph: PeriodicGraph) -> None:
        stripped = strip_inner_collar(interval(z1_graph, -10, 10), 1)
        assert stripped == interval(z1_graph, -8, 8)

    def test_transfer_bound(self, z1_graph: PeriodicGraph) -> None:
        domain = interval(z1_graph, -10, 10)
        assert isoperimetric_transfer_bound(domain, 1, 0) == Fraction(12, 17)

    def test_transfer_bound_empty_interior(self, z1_graph: PeriodicGraph) -> None:
        assert isoperimetric_transfer_bound(interval(z1_graph, 0, 1), 1, 0) is None

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_random_approximation_stays_in_collar(
        self, z2: GroupSpec, z2_graph: PeriodicGraph, seed: int
    ) -> None:
        domain = phi(ball(z2, 8), z2_graph)
        h = 2

        approx = h_approximate(domain, h, np.random.default_rng(seed))

        assert (domain ^ approx).issubset(h_boundary(domain, h))
        for d in (0, 1):
            bound = isoperimetric_transfer_bound(domain, h, d)
            assert bound is not None
            assert isoperimetric_quotient(approx, d) <= bound

    def test_same_seed_same_approximation(self, z2: GroupSpec, z2_graph: PeriodicGraph) -> None:
        domain = phi(ball(z2, 5), z2_graph)
        a = h_approximate(domain, 1, np.random.default_rng(11))
        b = h_approximate(domain, 1, np.random.default_rng(11))
        assert a == b

    def test_toggle_probability_extremes(self, z1_graph: PeriodicGraph) -> None:
        domain = interval(z1_graph, -10, 10)
        rng = np.random.default_rng(0)

        assert h_approximate(domain, 1, rng, 0.0) == domain
        assert h_approximate(domain, 1, rng, 1.0) == domain ^ h_boundary(domain, 1)

    def test_invalid_arguments(self, z1_graph: PeriodicGraph) -> None:
        domain = interval(z1_graph, -5, 5)
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            h_approximate(domain, 0, rng)
        with pytest.raises(ValueError):
            h_approximate(domain, 1, rng, 1.5)
