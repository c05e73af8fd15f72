"""Tests for the eigensolver, counting functions, heat kernels and Chebyshev traces."""

import math

import numpy as np
import pytest
from scipy import linalg

from idslab.config import reset_settings
from idslab.errors import (
    ChebyshevTruncationError,
    DenseDimensionError,
    EigenSolverConvergenceError,
)
from idslab.group import GroupSpec, PeriodicGraph, Vertex, VertexSet, ball, phi
from idslab.operator import DirichletMatrix, assemble_dirichlet, free_heat_diagonal
from idslab.spectral import (
    DistributionFunction,
    HeatTraceCurve,
    Spectrum,
    boundary_sensitivity_table,
    chebyshev_coefficients,
    chebyshev_degree,
    chebyshev_heat_action,
    chebyshev_heat_trace,
    count_below,
    counting_function,
    eigenvalues,
    heat_diagonal_at,
    heat_kernel_diagonal,
    heat_kernel_diagonals,
    heat_trace,
    sturm_count,
    tridiagonalize,
    truncation_bound,
)


def random_symmetric(n: int, seed: int) -> np.ndarray:
    a = np.random.default_rng(seed).normal(size=(n, n))
    return 0.5 * (a + a.T)


def interval_matrix(graph: PeriodicGraph, n: int) -> DirichletMatrix:
    spec = graph.group
    domain = VertexSet.from_vertices(graph, (Vertex(spec.element(i)) for i in range(n)))
    return assemble_dirichlet(domain)


@pytest.fixture
def square_matrix(z2: GroupSpec, z2_graph: PeriodicGraph) -> DirichletMatrix:
    return assemble_dirichlet(phi(ball(z2, 5), z2_graph))


class TestEigensolver:
    """Householder reduction and implicit QL against LAPACK."""

    @pytest.mark.parametrize("n", [1, 2, 16, 129])
    def test_toeplitz_spectrum(self, z1_graph: PeriodicGraph, n: int) -> None:
        spectrum = eigenvalues(interval_matrix(z1_graph, n))
        exact = 2.0 - 2.0 * np.cos(np.arange(1, n + 1) * math.pi / (n + 1))

        assert np.max(np.abs(spectrum.eigenvalues - np.sort(exact))) <= 1e-10

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_matrices_match_eigh(self, seed: int) -> None:
        a = random_symmetric(40, seed)
        spectrum = eigenvalues(a)
        assert np.allclose(spectrum.eigenvalues, linalg.eigvalsh(a), atol=1e-10)

    def test_eigenvectors(self, square_matrix: DirichletMatrix) -> None:
        a = square_matrix.dense()
        spectrum = eigenvalues(square_matrix, want_vectors=True)
        v = spectrum.eigenvectors

        assert v is not None
        assert np.allclose(v.T @ v, np.eye(spectrum.volume), atol=1e-10)
        assert np.allclose(a @ v, v * spectrum.eigenvalues, atol=1e-9)

    def test_lapack_method(self, square_matrix: DirichletMatrix) -> None:
        ql = eigenvalues(square_matrix)
        lapack = eigenvalues(square_matrix, method="lapack")
        assert np.allclose(ql.eigenvalues, lapack.eigenvalues, atol=1e-10)

    def test_unknown_method(self, square_matrix: DirichletMatrix) -> None:
        with pytest.raises(ValueError):
            eigenvalues(square_matrix, method="power")  # type: ignore[arg-type]

    def test_tridiagonalize_preserves_matrix(self) -> None:
        a = random_symmetric(12, 5)
        tri = tridiagonalize(a, want_basis=True)
        t = np.diag(tri.diagonal) + np.diag(tri.offdiagonal, 1) + np.diag(tri.offdiagonal, -1)

        assert tri.basis is not None
        assert np.allclose(tri.basis @ t @ tri.basis.T, a, atol=1e-12)

    def test_spectrum_is_read_only(self, z1_graph: PeriodicGraph) -> None:
        spectrum = eigenvalues(interval_matrix(z1_graph, 5))
        with pytest.raises(ValueError):
            spectrum.eigenvalues[0] = 1.0

    def test_iteration_cap(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("IDSLAB_QL_ITERATION_CAP", "1")
        reset_settings()
        with pytest.raises(EigenSolverConvergenceError) as exc_info:
            eigenvalues(random_symmetric(30, 9))
        assert exc_info.value.iterations == 1

    def test_non_square(self) -> None:
        with pytest.raises(ValueError):
            eigenvalues(np.zeros((2, 3)))

    def test_dense_limit(
        self,
        square_matrix: DirichletMatrix,
        z1_graph: PeriodicGraph,
        monkeypatch: pytest.MonkeyPatch,
    ) -> None:
        monkeypatch.setenv("IDSLAB_MAX_DENSE_DIMENSION", "50")
        reset_settings()

        with pytest.raises(DenseDimensionError):
            eigenvalues(square_matrix)
        with pytest.raises(DenseDimensionError):
            eigenvalues(square_matrix, method="lapack")
        assert eigenvalues(square_matrix, max_dense_dimension=61).volume == 61
        # tridiagonal input is never densified
        assert eigenvalues(interval_matrix(z1_graph, 129)).volume == 129


class TestSturmCount:
    """Counting eigenvalues below λ without solving."""

    @pytest.mark.parametrize("seed", range(5))
    def test_agrees_with_count_below(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        a = random_symmetric(int(rng.integers(1, 50)), seed)
        spectrum = eigenvalues(a)
        for lam in rng.uniform(spectrum.eigenvalues[0] - 1, spectrum.eigenvalues[-1] + 1, 10):
            assert sturm_count(a, float(lam)) == count_below(spectrum, float(lam))[0]

    def test_exact_eigenvalue_counts_strictly_below(self) -> None:
        assert sturm_count(np.diag([1.0, 2.0, 3.0]), 2.0) == 1


class TestCountingFunctions:
    """Normalized counts, heat traces and distribution functions."""

    @pytest.fixture
    def spectrum(self) -> Spectrum:
        return Spectrum(np.array([0.0, 1.0, 1.0, 2.0]))

    def test_count_is_strict(self, spectrum: Spectrum) -> None:
        assert count_below(spectrum, 1.0) == (1, 0.25)
        assert count_below(spectrum, 1.5) == (3, 0.75)
        assert counting_function(spectrum, [-1.0, 0.0, 0.5, 3.0]).tolist() == [0, 0, 0.25, 1]

    def test_distribution_function(self, spectrum: Spectrum) -> None:
        dist = DistributionFunction.from_spectrum(spectrum)

        assert dist.jump_points.tolist() == [0.0, 1.0, 2.0]
        assert dist.multiplicities.tolist() == [1, 2, 1]
        assert dist(1.0) == 0.25
        assert dist(1.0 + 1e-12) == 0.75
        assert dist.evaluate([0.0, 1.5, 5.0]).tolist() == [0.0, 0.75, 1.0]
        assert dist.csv_rows() == [(0.0, 0.25), (1.0, 0.75), (2.0, 1.0)]

    def test_laplace_identity_is_exact(self, square_matrix: DirichletMatrix) -> None:
        spectrum = eigenvalues(square_matrix)
        dist = DistributionFunction.from_spectrum(spectrum)
        for t in (0.1, 1.0, 3.0):
            assert dist.laplace_transform(t) == heat_trace(spectrum, t)

    def test_heat_trace_against_expm(self, square_matrix: DirichletMatrix) -> None:
        a = square_matrix.dense()
        t = 0.7
        expected = np.trace(linalg.expm(-t * a)) / a.shape[0]
        assert heat_trace(eigenvalues(square_matrix), t) == pytest.approx(expected, rel=1e-12)

    def test_heat_kernel_diagonal(self, square_matrix: DirichletMatrix) -> None:
        a = square_matrix.dense()
        t = 1.3
        spectrum = eigenvalues(square_matrix, want_vectors=True)
        expected = np.diag(linalg.expm(-t * a))

        assert np.allclose(heat_kernel_diagonals(spectrum, t), expected, atol=1e-10)
        assert heat_kernel_diagonal(spectrum, t, 7) == pytest.approx(expected[7], abs=1e-10)

    def test_kernel_needs_vectors(self, square_matrix: DirichletMatrix) -> None:
        with pytest.raises(ValueError):
            heat_kernel_diagonal(eigenvalues(square_matrix), 1.0, 0)

    def test_time_must_be_positive(self, spectrum: Spectrum) -> None:
        with pytest.raises(ValueError):
            heat_trace(spectrum, 0.0)

    def test_heat_trace_curve(self, spectrum: Spectrum) -> None:
        curve = HeatTraceCurve.from_spectrum(spectrum, [1, 2])
        assert curve.t_grid == (1.0, 2.0)
        assert curve.values[0] == heat_trace(spectrum, 1.0)


class TestChebyshev:
    """Chebyshev heat actions and stochastic traces."""

    def test_coefficients_reproduce_exponential(self) -> None:
        lo, hi, t = 0.0, 8.0, 1.5
        coeffs = chebyshev_coefficients(t, lo, hi, 60)
        lam = np.linspace(lo, hi, 9)
        x = (lam - 0.5 * (hi + lo)) / (0.5 * (hi - lo))
        series = np.polynomial.chebyshev.chebval(x, coeffs)

        assert np.allclose(series, np.exp(-t * lam), atol=1e-13)

    def test_bound_decreases_with_degree(self) -> None:
        bounds = [truncation_bound(2.0, 0.0, 8.0, d) for d in (10, 20, 40)]
        assert bounds[0] > bounds[1] > bounds[2]
        assert truncation_bound(2.0, 0.0, 8.0, chebyshev_degree(2.0, 0.0, 8.0, 1e-12)) <= 1e-12

    def test_heat_action_against_expm(self, square_matrix: DirichletMatrix) -> None:
        a = square_matrix.dense()
        vectors = np.random.default_rng(0).normal(size=(a.shape[0], 3))
        t = 2.0

        result = chebyshev_heat_action(square_matrix, t, vectors)

        assert np.allclose(result, linalg.expm(-t * a) @ vectors, atol=1e-10)

    def test_heat_action_at_zero(self, square_matrix: DirichletMatrix) -> None:
        vectors = np.ones(square_matrix.dimension)
        assert np.array_equal(chebyshev_heat_action(square_matrix, 0.0, vectors), vectors)

    def test_degree_too_small(self, square_matrix: DirichletMatrix) -> None:
        vectors = np.ones(square_matrix.dimension)
        with pytest.raises(ChebyshevTruncationError):
            chebyshev_heat_action(square_matrix, 5.0, vectors, degree=3)

    def test_stochastic_trace(self, square_matrix: DirichletMatrix) -> None:
        t = 1.0
        exact = heat_trace(eigenvalues(square_matrix), t)

        estimate = chebyshev_heat_trace(
            square_matrix, t, probes=200, degree=60, rng=np.random.default_rng(3)
        )

        assert estimate.probes == 200
        assert estimate.truncation_bound <= 1e-8
        assert abs(estimate.value - exact) <= 5 * estimate.standard_error + 1e-8

    @pytest.mark.parametrize("t", [0.5, 2.0])
    def test_stochastic_trace_on_a_long_path(self, z1_graph: PeriodicGraph, t: float) -> None:
        n = 500
        matrix = interval_matrix(z1_graph, n)
        exact = math.fsum(np.exp(-t * (2.0 - 2.0 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1)))))
        lo, hi = matrix.gershgorin_bounds()

        estimate = chebyshev_heat_trace(
            matrix, t, 64, chebyshev_degree(t, lo, hi, 1e-10), np.random.default_rng(17), 1e-10
        )

        assert abs(estimate.value - exact / n) <= 3 * estimate.standard_error + 1e-10

    def test_stochastic_trace_at_zero(self, square_matrix: DirichletMatrix) -> None:
        estimate = chebyshev_heat_trace(square_matrix, 0.0, 4, 10, np.random.default_rng(0))
        assert estimate.value == 1.0


class TestBoundaryTable:
    """Empirical collar depth h(t, ε)."""

    def test_reference_matches_free_kernel(self, z1_graph: PeriodicGraph) -> None:
        center = Vertex(z1_graph.group.identity)
        value = heat_diagonal_at(z1_graph, center, 40, 1.0)
        assert value == pytest.approx(free_heat_diagonal(1.0, 1), abs=1e-12)

    def test_single_site_domain(self, z1_graph: PeriodicGraph) -> None:
        center = Vertex(z1_graph.group.identity)
        value = heat_diagonal_at(z1_graph, center, 0, 0.5)
        assert value == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_table(self, z1_graph: PeriodicGraph) -> None:
        table = boundary_sensitivity_table(z1_graph, [0.5, 1.0], 10, 1e-6)
        gaps = table.gaps(1.0)

        assert len(gaps) == 11
        assert gaps[0] > gaps[5] > gaps[10]
        pad = table.required_pad(1.0)
        assert pad is not None
        assert gaps[pad] <= 1e-6
        assert all(gap > 1e-6 for gap in gaps[:pad])
        assert table.required_pad(0.5) <= pad

    def test_unreached_epsilon(self, z1_graph: PeriodicGraph) -> None:
        table = boundary_sensitivity_table(z1_graph, [1.0], 2, 1e-12)
        assert table.required_pad(1.0) is None

    def test_negative_depth(self, z1_graph: PeriodicGraph) -> None:
        with pytest.raises(ValueError):
            boundary_sensitivity_table(z1_graph, [1.0], -1, 1e-6)
