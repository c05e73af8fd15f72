"""Tests for the Pastur-Šubin hypothesis check and the non-randomness diagnostic."""

from typing import Sequence

import numpy as np
import pytest
from scipy import special

from idslab.folner import FolnerSequence
from idslab.group import GroupSpec, PeriodicGraph
from idslab.pipeline import (
    RISING_GAPS_NOTE,
    STATIONARY_NOTE,
    AdmissibleSequence,
    Hypothesis,
    IDSEstimate,
    LaplaceReport,
    build_admissible,
    counting_functions,
    laplace_pipeline,
    laplace_witness,
    non_randomness_check,
    pastur_subin_limit,
    solve_sweep,
)


@pytest.fixture
def adm(z1: GroupSpec, z1_graph: PeriodicGraph) -> AdmissibleSequence:
    seq = FolnerSequence.combinatorial_balls(z1, [4, 8, 16, 32])
    return build_admissible(seq, z1_graph, 2.0, 0, seed=0)


@pytest.fixture
def free_data(adm: AdmissibleSequence):
    sweep = solve_sweep(adm, [1], workers=1)
    report = laplace_pipeline(adm, [1], None, None, [0.5, 1.0, 2.0], sweep=sweep)
    idse = counting_functions(adm, [1], None, None, np.linspace(0.0, 4.0, 9), sweep=sweep)
    return report, idse


def estimate(
    limit: Sequence[float], seeds: Sequence[int], n: int = 2, mask: Sequence[bool] = ()
) -> IDSEstimate:
    """Synthetic estimate whose counting functions equal ``limit`` at every index."""
    grid = np.linspace(0.0, 1.0, len(limit))
    per_index = np.tile(np.asarray(limit, dtype=float), (n, len(seeds), 1))
    atom_mask = np.asarray(mask, dtype=bool) if mask else np.zeros(len(limit), dtype=bool)
    return IDSEstimate(
        lambda_grid=grid,
        per_index=per_index,
        indices=tuple(range(n)),
        seeds=tuple(seeds),
        volumes=(5,) * n,
        spectral_minima=np.full((n, len(seeds)), 0.1),
        spectral_maxima=np.full((n, len(seeds)), 3.0),
        atom_mask=atom_mask,
    )


def constant_report(value: float, n: int) -> LaplaceReport:
    return LaplaceReport(
        t_grid=np.array([1.0]),
        values=np.full((n, 1, 1), value),
        indices=tuple(range(n)),
        seeds=(1,),
        volumes=(5,) * n,
    )


class TestPasturSubinLimit:
    def test_free_lattice_passes(self, free_data) -> None:
        report, idse = free_data

        verdict = pastur_subin_limit(report, idse, 0.0, dimension=1, cauchy_threshold=0.05)

        assert verdict.passed
        assert verdict.violations == ()
        assert np.array_equal(verdict.limit, idse.limit)
        assert verdict.laplace_gaps.shape == (3, 3)

    def test_every_hypothesis_can_fail(self, free_data) -> None:
        report, idse = free_data

        # claiming H ≥ 1 is false for the free Laplacian
        verdict = pastur_subin_limit(report, idse, -1.0, dimension=1, cauchy_threshold=1e-12)

        assert not verdict.passed
        assert verdict.failed_hypotheses == [
            Hypothesis.VANISH_BELOW,
            Hypothesis.LAPLACE_BOUND,
            Hypothesis.CAUCHY,
        ]
        below = [v for v in verdict.violations if v.hypothesis is Hypothesis.VANISH_BELOW]
        assert all(v.t is None and v.witness == 1.0 for v in below)

    def test_stationary_sequence(self) -> None:
        verdict = pastur_subin_limit(constant_report(0.3, 3), estimate([0.0, 0.5], [1], n=3), 0.0)

        assert verdict.passed
        assert STATIONARY_NOTE in verdict.notes

    def test_rising_cauchy_gaps_are_noted(self, free_data) -> None:
        report = LaplaceReport(
            t_grid=np.array([1.0]),
            values=np.array([0.3, 0.31, 0.32, 0.40]).reshape(4, 1, 1),
            indices=(0, 1, 2, 3),
            seeds=(1,),
            volumes=(5,) * 4,
        )

        verdict = pastur_subin_limit(report, estimate([0.0, 0.5], [1], n=4), 0.0)

        assert any(note.startswith(RISING_GAPS_NOTE) for note in verdict.notes)
        free = pastur_subin_limit(*free_data, 0.0, dimension=1, cauchy_threshold=0.05)
        assert not any(note.startswith(RISING_GAPS_NOTE) for note in free.notes)

    def test_single_index(self) -> None:
        verdict = pastur_subin_limit(constant_report(0.3, 1), estimate([0.0, 0.5], [1], n=1), 0.0)

        assert verdict.passed
        assert any("single index" in note for note in verdict.notes)

    def test_bound_without_free_diagonal(self) -> None:
        verdict = pastur_subin_limit(constant_report(1.5, 2), estimate([0.0, 0.5], [1]), 0.0)
        assert verdict.failed_hypotheses == [Hypothesis.LAPLACE_BOUND]


def test_laplace_witness() -> None:
    t = np.array([0.5, 1.0])

    assert np.array_equal(laplace_witness(0.0, t, None), [1.0, 1.0])
    assert np.allclose(laplace_witness(1.0, t, None), np.exp(t))
    assert np.allclose(laplace_witness(0.5, t, 2), np.exp(0.5 * t) * special.i0e(2 * t) ** 2)


class TestNonRandomness:
    def test_pairwise_distances(self) -> None:
        groups = [
            estimate([0.0, 0.5, 1.0], [1, 2]),
            estimate([0.0, 0.6, 1.0], [3, 4]),
            estimate([0.0, 0.5, 0.9], [5]),
        ]

        report = non_randomness_check(groups)

        assert report.distances == pytest.approx({(0, 1): 0.1, (0, 2): 0.1, (1, 2): 0.1})
        assert report.max_distance == pytest.approx(0.1)
        assert report.excluded_points == 0

    def test_atoms_are_excluded(self) -> None:
        groups = [
            estimate([0.0, 0.5, 1.0], [1]),
            estimate([0.0, 0.8, 1.0], [2], mask=[False, True, False]),
        ]

        report = non_randomness_check(groups)

        assert report.distances[(0, 1)] == 0.0
        assert report.excluded_points == 1

    def test_invalid_groups(self) -> None:
        with pytest.raises(ValueError, match="two"):
            non_randomness_check([estimate([0.0, 1.0], [1])])
        with pytest.raises(ValueError, match="disjoint"):
            non_randomness_check([estimate([0.0, 1.0], [1, 2]), estimate([0.0, 1.0], [2])])
        with pytest.raises(ValueError, match="grids"):
            non_randomness_check([estimate([0.0, 1.0], [1]), estimate([0.0, 0.5, 1.0], [2])])
