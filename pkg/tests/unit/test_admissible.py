"""Tests for admissible sequences."""

import pytest

from idslab.errors import ExperimentTooSmallError, InvalidSequenceError
from idslab.folner import FolnerSequence, h_boundary
from idslab.group import (
    GroupSpec,
    InterEdge,
    PeriodicGraph,
    Vertex,
    VertexSet,
    inscribed_radius,
    phi,
)
from idslab.pipeline import (
    AdmissibleSequence,
    ApproximationSide,
    admissible_from_domains,
    approximation_radius,
    build_admissible,
)


def interval(graph: PeriodicGraph, lo: int, hi: int) -> VertexSet:
    spec = graph.group
    return VertexSet.from_vertices(graph, (Vertex(spec.element(i)) for i in range(lo, hi + 1)))


@pytest.fixture
def balls(z1: GroupSpec) -> FolnerSequence:
    return FolnerSequence.combinatorial_balls(z1, [6, 12, 24, 48])


class TestBuildAdmissible:
    """Tempered extraction followed by random h-approximation."""

    def test_exact_domains_when_h_is_zero(
        self, balls: FolnerSequence, z1_graph: PeriodicGraph
    ) -> None:
        adm = build_admissible(balls, z1_graph, 2.0, 0, seed=1)

        assert len(adm) == 4
        assert adm.domains == adm.cores
        assert adm.volumes == (13, 25, 49, 97)

    def test_domains_stay_within_collar(
        self, balls: FolnerSequence, z1_graph: PeriodicGraph
    ) -> None:
        adm = build_admissible(balls, z1_graph, 2.0, 2, seed=5)

        for core, domain in zip(adm.cores, adm.domains):
            assert (core ^ domain).issubset(h_boundary(core, 2))
        assert adm.side is ApproximationSide.CORE

    def test_approximated_domains_swallow_growing_balls(
        self, z2: GroupSpec, z2_graph: PeriodicGraph
    ) -> None:
        seq = FolnerSequence.combinatorial_balls(z2, [2, 8, 16, 32])

        adm = build_admissible(seq, z2_graph, 4.0, 1, seed=12)

        radii = [inscribed_radius(domain) for domain in adm.domains]
        assert all(b > a for a, b in zip(radii, radii[1:]))
        assert radii[-1] >= 30

    def test_seed_fixes_domains(self, balls: FolnerSequence, z1_graph: PeriodicGraph) -> None:
        a = build_admissible(balls, z1_graph, 2.0, 1, seed=9)
        b = build_admissible(balls, z1_graph, 2.0, 1, seed=9)
        assert a.domains == b.domains

    def test_too_few_tempered_sets(self, z1: GroupSpec, z1_graph: PeriodicGraph) -> None:
        seq = FolnerSequence.combinatorial_balls(z1, [1, 50, 51])
        with pytest.raises(ExperimentTooSmallError):
            build_admissible(seq, z1_graph, 1.05, 1, seed=0)

    def test_rejects_far_domains(self, balls: FolnerSequence, z1_graph: PeriodicGraph) -> None:
        adm = build_admissible(balls, z1_graph, 2.0, 0, seed=1)
        wrong = (interval(z1_graph, -3, 3),) + adm.domains[1:]

        with pytest.raises(InvalidSequenceError, match="approximation"):
            AdmissibleSequence(adm.folner, z1_graph, wrong, 1, 2.0)

    def test_rejects_untempered_sequence(
        self, balls: FolnerSequence, z1_graph: PeriodicGraph
    ) -> None:
        adm = build_admissible(balls, z1_graph, 2.0, 0, seed=1)
        with pytest.raises(InvalidSequenceError, match="temperedness"):
            AdmissibleSequence(adm.folner, z1_graph, adm.domains, 0, 1.2)

    def test_domain_count(self, balls: FolnerSequence, z1_graph: PeriodicGraph) -> None:
        adm = build_admissible(balls, z1_graph, 2.0, 0, seed=1)
        with pytest.raises(InvalidSequenceError):
            AdmissibleSequence(adm.folner, z1_graph, adm.domains[:2], 0, 2.0)


class TestConverseConstruction:
    """Index sets derived from given domains."""

    def test_approximation_radius(self, z1_graph: PeriodicGraph) -> None:
        target = interval(z1_graph, -10, 10)

        assert approximation_radius(target, target) == 0
        assert approximation_radius(target, interval(z1_graph, -8, 8)) == 1
        assert approximation_radius(target, interval(z1_graph, -12, 12)) == 1

    def test_full_cells_on_lattice(self, z1_graph: PeriodicGraph) -> None:
        domains = [interval(z1_graph, -r, r) for r in (5, 10, 20)]

        adm = admissible_from_domains(domains, 2.0)

        assert adm.h == 0
        assert adm.side is ApproximationSide.DOMAIN
        assert adm.volumes == (11, 21, 41)

    def test_partial_cells(self, z1: GroupSpec) -> None:
        ladder = PeriodicGraph(
            z1,
            fiber_size=2,
            intra_edges=((0, 1),),
            inter_edges=(InterEdge(z1.element(1), 0, 0), InterEdge(z1.element(1), 1, 1)),
        )
        domains = []
        for r in (3, 6, 12):
            cells = phi(FolnerSequence.combinatorial_balls(z1, [r])[0], ladder)
            extra = VertexSet.from_vertices(ladder, [Vertex(z1.element(r + 1), 0)])
            domains.append(cells | extra)

        adm = admissible_from_domains(domains, 2.0)

        # the half-filled cell always touches the outside through its rung
        assert adm.h == 0
        assert [len(s) for s in adm.folner] == [7, 13, 25]
        assert adm.volumes == (15, 27, 51)

    def test_no_domains(self) -> None:
        with pytest.raises(InvalidSequenceError):
            admissible_from_domains([], 2.0)
