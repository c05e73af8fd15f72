"""Property suites run by ``idslab verify``."""

import logging
import math
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..environment import (
    EnvironmentSample,
    SingleSitePotential,
    UniformLaw,
    potential_value,
    shift,
)
from ..errors import IDSLabError
from ..folner import (
    EquivalenceVerdict,
    FolnerSequence,
    check_folner_isoperimetric_equivalence,
    folner_defect,
    temperedness_quotient,
)
from ..group import (
    GroupElement,
    GroupSpec,
    PeriodicGraph,
    Vertex,
    VertexSet,
    ball,
    graph_distance,
    growth_exponent,
    inverse,
    metric_ball,
    neighbours,
    phi,
    word_norm,
)
from ..models import CheckRecord
from ..operator import assemble_dirichlet, free_heat_diagonal
from ..pipeline import LaplaceReport, PotentialSiteFunction, ergodic_average
from ..spectral import (
    chebyshev_degree,
    chebyshev_heat_trace,
    count_below,
    eigenvalues,
    heat_diagonal_at,
    heat_kernel_diagonals,
    heat_trace,
    sturm_count,
)
from .runner import Experiment, PipelineOutcome, folner_sequence

logger = logging.getLogger(__name__)

Check = Callable[[], CheckRecord]

GROWTH_RADII = (4, 8, 12, 16)
HEAT_TIMES = (0.5, 1.0, 2.0)
BOUNDARY_DEPTH = 20
BOUNDARY_TOLERANCE = 1e-6
CHEBYSHEV_TARGET_SIZE = 500


def _random_element(spec: GroupSpec, rng: np.random.Generator, spread: int = 6) -> GroupElement:
    coords = rng.integers(-spread, spread + 1, size=spec.rank)
    return spec.element(*(int(c) for c in coords))


def _compatibility_cases(
    exp: Experiment,
) -> List[Tuple[GroupSpec, PeriodicGraph, SingleSitePotential]]:
    potential = exp.potential or SingleSitePotential.unit_mass(exp.spec.rank)
    cases = [(exp.spec, exp.graph, potential)]
    for spec in (GroupSpec.integer_lattice(2), GroupSpec.heisenberg()):
        if spec != exp.spec:
            cases.append(
                (spec, PeriodicGraph.cayley(spec), SingleSitePotential.unit_mass(spec.rank))
            )
    return cases


def check_compatibility(exp: Experiment, samples: int, seed: int = 0) -> CheckRecord:
    """V^{T_γω}(x) == V^ω(γ⁻¹x) bit for bit on the experiment group, ℤ² and H₃(ℤ)."""
    rng = np.random.default_rng(seed)
    law = exp.law or UniformLaw()
    cases = _compatibility_cases(exp)
    mismatches = 0
    for spec, graph, potential in cases:
        for _ in range(samples):
            gamma = _random_element(spec, rng)
            x = Vertex(_random_element(spec, rng), int(rng.integers(graph.fiber_size)))
            omega = EnvironmentSample.fresh(int(rng.integers(2**62)), law, spec)
            moved = Vertex(inverse(gamma) * x.element, x.fiber)
            lhs = potential_value(shift(omega, gamma), potential, x, graph)
            rhs = potential_value(omega, potential, moved, graph)
            mismatches += lhs != rhs
    families = ", ".join(spec.family for spec, _, _ in cases)
    return CheckRecord(
        name="compatibility",
        passed=mismatches == 0,
        detail=f"{mismatches} mismatches over {samples} (gamma, x, seed) triples on {families}",
        value=float(mismatches),
        tolerance=0.0,
    )


def _expected_growth(spec: GroupSpec) -> Optional[Tuple[float, float]]:
    if spec.rank <= 3 and spec == GroupSpec.integer_lattice(spec.rank):
        return spec.rank - 0.35, spec.rank + 0.4
    if spec == GroupSpec.heisenberg():
        return 3.3, 4.4
    return None


def check_word_norm(exp: Experiment, radius: int = 3) -> CheckRecord:
    """Word norms equal Cayley-graph distances on E^r; the growth slope fits the group."""
    spec = exp.spec
    cayley = PeriodicGraph.cayley(spec)
    origin = Vertex(spec.identity)
    mismatches = sum(
        graph_distance(cayley, origin, Vertex(g), radius) != word_norm(spec, g)
        for g in ball(spec, radius)
    )
    detail = f"{mismatches} distance mismatches on E^{radius}"
    growth_ok = True
    expected = _expected_growth(spec)
    if expected is not None:
        exponent = growth_exponent(spec, GROWTH_RADII)
        growth_ok = expected[0] <= exponent <= expected[1]
        detail += f", growth exponent {exponent:.3f} in [{expected[0]}, {expected[1]}]"
    return CheckRecord(
        name="word_norm_growth",
        passed=mismatches == 0 and growth_ok,
        detail=detail,
        value=float(mismatches),
        tolerance=0.0,
    )


def check_toeplitz(sizes: tuple = (16, 128, 512)) -> CheckRecord:
    """Interval spectra on ℤ¹ against 2 − 2cos(kπ/(n+1))."""
    spec = GroupSpec.integer_lattice(1)
    graph = PeriodicGraph.cayley(spec)
    worst = 0.0
    for n in sizes:
        domain = VertexSet.from_vertices(graph, (Vertex(spec.element(i)) for i in range(n)))
        values = eigenvalues(assemble_dirichlet(domain)).eigenvalues
        exact = 2.0 - 2.0 * np.cos(np.arange(1, n + 1) * math.pi / (n + 1))
        worst = max(worst, float(np.max(np.abs(values - np.sort(exact)))))
    return CheckRecord(
        name="eigensolver_toeplitz",
        passed=worst <= 1e-10,
        detail=f"sizes {list(sizes)}",
        value=worst,
        tolerance=1e-10,
    )


def check_sturm(samples: int, seed: int = 1) -> CheckRecord:
    """sturmCount agrees with countBelow on random symmetric matrices."""
    rng = np.random.default_rng(seed)
    disagreements = 0
    for _ in range(samples):
        n = int(rng.integers(1, 65))
        a = rng.normal(size=(n, n))
        matrix = 0.5 * (a + a.T)
        spectrum = eigenvalues(matrix)
        lam = float(rng.uniform(spectrum.eigenvalues[0] - 1.0, spectrum.eigenvalues[-1] + 1.0))
        disagreements += sturm_count(matrix, lam) != count_below(spectrum, lam)[0]
    return CheckRecord(
        name="sturm_count",
        passed=disagreements == 0,
        detail=f"{disagreements} disagreements over {samples} (matrix, lambda) pairs",
        value=float(disagreements),
        tolerance=0.0,
    )


def check_folner_arithmetic(max_radius: int = 64) -> CheckRecord:
    """ℤ¹ interval defects and temperedness quotients in exact arithmetic."""
    spec = GroupSpec.integer_lattice(1)
    step = spec.element(1)
    failures = 0
    for r in range(max_radius + 1):
        if folner_defect(ball(spec, r), step) != Fraction(2, 2 * r + 1):
            failures += 1
        for r_next in range(r, max_radius + 1):
            expected = Fraction(2 * (r + r_next) + 1, 2 * r_next + 1)
            if temperedness_quotient(ball(spec, r), ball(spec, r_next)) != expected:
                failures += 1
    return CheckRecord(
        name="folner_arithmetic",
        passed=failures == 0,
        detail=f"intervals up to radius {max_radius}",
        value=float(failures),
        tolerance=0.0,
    )


def _random_subset(
    domain: VertexSet, keep: float, anchor: Vertex, rng: np.random.Generator
) -> VertexSet:
    mask = rng.random(domain.size) < keep
    mask[domain.index_of(domain.graph.vertex_keys([anchor]))] = True
    return VertexSet.from_keys(domain.graph, domain.keys[mask])


def nested_domains(
    graph: PeriodicGraph, center: Vertex, rng: np.random.Generator, max_radius: int = 4
) -> Tuple[VertexSet, VertexSet]:
    """Random D ⊂ D' ⊂ B_r(center), both containing the center."""
    radius = int(rng.integers(2, max_radius + 1))
    outer = _random_subset(metric_ball(graph, center, radius), 0.8, center, rng)
    return _random_subset(outer, 0.6, center, rng), outer


def check_heat_kernel(exp: Experiment, samples: int, seed: int = 2) -> CheckRecord:
    """Domain monotonicity and the free upper bound on random nested domains."""
    rng = np.random.default_rng(seed)
    center = Vertex(exp.spec.identity, 0)
    dimension = exp.free_dimension
    worst_monotone = 0.0
    worst_bound = 0.0
    for _ in range(samples):
        inner, outer = nested_domains(exp.graph, center, rng)
        omega = exp.environment(int(rng.integers(2**62)))
        t = float(rng.choice(HEAT_TIMES))
        k_inner = heat_kernel_diagonals(
            eigenvalues(
                assemble_dirichlet(inner, omega, exp.potential), want_vectors=True, method="lapack"
            ),
            t,
        )
        k_outer = heat_kernel_diagonals(
            eigenvalues(
                assemble_dirichlet(outer, omega, exp.potential), want_vectors=True, method="lapack"
            ),
            t,
        )
        positions = outer.index_of(inner.keys)
        worst_monotone = max(worst_monotone, float(np.max(k_inner - k_outer[positions])))
        witness = math.exp(exp.c0 * t)
        if dimension is not None:
            witness *= free_heat_diagonal(t, dimension)
        worst_bound = max(worst_bound, float(np.max(k_outer)) / witness - 1.0)
    passed = worst_monotone <= 1e-10 and worst_bound <= 1e-8
    return CheckRecord(
        name="heat_kernel_invariants",
        passed=passed,
        detail=(
            f"{samples} nested pairs: monotonicity excess {worst_monotone:.3g}, "
            f"bound excess {worst_bound:.3g}"
        ),
        value=max(worst_monotone, worst_bound),
        tolerance=1e-8,
    )


def check_boundary_principle(
    exp: Experiment, samples: int, depth: int = BOUNDARY_DEPTH, seed: int = 3
) -> CheckRecord:
    """On ℤ¹, k_{B_depth(p)}(t, p, p) matches a far larger ball for t ≤ 1."""
    rng = np.random.default_rng(seed)
    spec = GroupSpec.integer_lattice(1)
    graph = PeriodicGraph.cayley(spec)
    law = exp.law or UniformLaw()
    potential = SingleSitePotential.unit_mass(1)
    worst = 0.0
    for _ in range(samples):
        omega = EnvironmentSample.fresh(int(rng.integers(2**62)), law, spec)
        center = Vertex(spec.element(int(rng.integers(-1000, 1001))))
        t = float(rng.uniform(0.05, 1.0))
        near = heat_diagonal_at(graph, center, depth, t, omega, potential)
        far = heat_diagonal_at(graph, center, 3 * depth, t, omega, potential)
        worst = max(worst, abs(near - far))
    return CheckRecord(
        name="boundary_principle",
        passed=worst <= BOUNDARY_TOLERANCE,
        detail=f"collar depth {depth} over {samples} environments with t in (0, 1]",
        value=worst,
        tolerance=BOUNDARY_TOLERANCE,
    )


def check_co_decay(exp: Experiment) -> CheckRecord:
    """Defects and isoperimetric quotients decay together; a constant sequence stagnates."""
    params = exp.config.folner
    report = check_folner_isoperimetric_equivalence(
        folner_sequence(exp), exp.graph, params.d_max, params.decay_threshold
    )
    control = FolnerSequence.user_supplied(exp.spec, [ball(exp.spec, 1)] * 3)
    stagnant = check_folner_isoperimetric_equivalence(
        control, exp.graph, params.d_max, params.decay_threshold
    )
    passed = (
        report.verdict is not EquivalenceVerdict.MISMATCH
        and stagnant.verdict is EquivalenceVerdict.CO_STAGNATION
    )
    return CheckRecord(
        name="co_decay",
        passed=passed,
        detail=f"sequence {report.verdict.value}, constant control {stagnant.verdict.value}",
        value=float(report.rows[-1].max_defect),
        tolerance=params.decay_threshold,
    )


def check_ergodic_average(exp: Experiment) -> CheckRecord:
    """Potential averages over φ(I_n) against the ensemble mean, within 3σ."""
    if exp.potential is None or exp.law is None:
        return CheckRecord(name="ergodic_average", passed=True, detail="V = 0, nothing to average")
    domains = [phi(index_set, exp.graph) for index_set in folner_sequence(exp)]
    omega = exp.environment(exp.config.all_seeds[0])
    result = ergodic_average(
        PotentialSiteFunction(exp.potential, exp.law),
        omega,
        domains,
        exp.config.heat.reference_seeds,
        exp.law,
    )
    spread = math.hypot(float(result.average_stderrs[-1]), result.reference_stderr)
    return CheckRecord(
        name="ergodic_average",
        passed=result.within(3.0),
        detail=f"final average {result.averages[-1]:.6g} vs reference {result.reference:.6g}",
        value=float(result.deviations[-1]),
        tolerance=3.0 * spread,
    )


def grown_ball(graph: PeriodicGraph, center: Vertex, size: int) -> VertexSet:
    """Smallest metric ball around ``center`` with at least ``size`` vertices."""
    current = VertexSet.from_vertices(graph, [center])
    while current.size < size:
        grown = current.union(neighbours(current))
        if grown.size == current.size:
            break
        current = grown
    return current


def check_chebyshev_trace(exp: Experiment, seed: int = 4) -> CheckRecord:
    """Stochastic Chebyshev trace against the exact trace on a large ball."""
    solver = exp.config.solver
    limit = solver.max_dense_dimension
    target = CHEBYSHEV_TARGET_SIZE if limit is None else min(CHEBYSHEV_TARGET_SIZE, limit)
    domain = grown_ball(exp.graph, Vertex(exp.spec.identity, 0), target)
    omega = exp.environment(exp.config.all_seeds[0])
    matrix = assemble_dirichlet(domain, omega, exp.potential)
    t = float(exp.config.t_grid[0])
    lo, hi = matrix.gershgorin_bounds()
    degree = chebyshev_degree(t, lo, hi, solver.chebyshev_tolerance)
    estimate = chebyshev_heat_trace(
        matrix,
        t,
        solver.chebyshev_probes,
        degree,
        np.random.default_rng(seed),
        solver.chebyshev_tolerance,
    )
    exact = heat_trace(eigenvalues(matrix, method="lapack", max_dense_dimension=limit), t)
    allowed = 3.0 * estimate.standard_error + estimate.truncation_bound
    error = abs(estimate.value - exact)
    return CheckRecord(
        name="chebyshev_oracle",
        passed=error <= allowed,
        detail=(
            f"|D| = {domain.size}, t = {t}, degree {degree}, "
            f"{solver.chebyshev_probes} probes"
        ),
        value=error,
        tolerance=allowed,
    )


def check_equivariance(exp: Experiment, samples: int, seed: int = 5) -> CheckRecord:
    """H^{T_γω}_{γD} and H^ω_D share diagonal multisets and spectra."""
    rng = np.random.default_rng(seed)
    max_radius = 3 if exp.spec.rank <= 3 else 2
    diagonal_mismatches = 0
    worst = 0.0
    for _ in range(samples):
        gamma = _random_element(exp.spec, rng)
        center = Vertex(_random_element(exp.spec, rng), int(rng.integers(exp.graph.fiber_size)))
        domain = metric_ball(exp.graph, center, int(rng.integers(1, max_radius + 1)))
        omega = exp.environment(int(rng.integers(2**62)))
        moved_omega = shift(omega, gamma) if omega is not None else None
        base = assemble_dirichlet(domain, omega, exp.potential)
        moved = assemble_dirichlet(domain.translate(gamma), moved_omega, exp.potential)
        diagonal_mismatches += not np.array_equal(np.sort(base.diagonal), np.sort(moved.diagonal))
        a = eigenvalues(base, method="lapack").eigenvalues
        b = eigenvalues(moved, method="lapack").eigenvalues
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckRecord(
        name="equivariance",
        passed=diagonal_mismatches == 0 and worst <= 1e-10,
        detail=f"{diagonal_mismatches} diagonal mismatches over {samples} translations",
        value=worst,
        tolerance=1e-10,
    )


def check_laplace(exp: Experiment, laplace: LaplaceReport) -> List[CheckRecord]:
    """Laplace identity, bounds and the final heat-kernel lemma gap."""
    records = [
        CheckRecord(
            name="laplace_identity",
            passed=laplace.identity_gap == 0.0,
            detail="trace equals the Stieltjes integral for every (n, seed, t)",
            value=laplace.identity_gap,
            tolerance=0.0,
        ),
        CheckRecord(
            name="laplace_bounds",
            passed=laplace.within_bounds(),
            detail="values in (0, exp(C0 t)]",
        ),
    ]
    if laplace.kernel_gaps is not None:
        threshold = exp.config.checks.heat_lemma_threshold
        final = float(np.max(laplace.kernel_gaps[-1]))
        records.append(
            CheckRecord(
                name="heat_kernel_lemma",
                passed=final <= threshold,
                detail="largest final-index gap over the t grid",
                value=final,
                tolerance=threshold,
            )
        )
    return records


def check_outcome(exp: Experiment, outcome: PipelineOutcome) -> List[CheckRecord]:
    """Checks on the data of an ids pipeline run."""
    idse = outcome.idse
    checks = exp.config.checks
    records = check_laplace(exp, outcome.laplace)
    diffs = np.diff(idse.per_index, axis=2)
    in_range = np.all(idse.per_index >= 0) and np.all(idse.per_index <= 1)
    valid = bool(np.all(diffs >= 0) and in_range)
    records.append(
        CheckRecord(
            name="distribution_functions",
            passed=valid,
            detail="monotone in lambda with values in [0, 1]",
        )
    )
    upper = 2 * exp.graph.max_degree + exp.c0
    support_ok = bool(
        np.all(idse.spectral_minima >= -exp.c0 - 1e-10)
        and np.all(idse.spectral_maxima <= upper + 1e-10)
    )
    records.append(
        CheckRecord(
            name="support_containment",
            passed=support_ok,
            detail=f"jump points within [{-exp.c0}, {upper}]",
        )
    )
    records.append(
        CheckRecord(
            name="pastur_subin",
            passed=outcome.verdict.passed,
            detail="; ".join(
                [v.message for v in outcome.verdict.violations] + list(outcome.verdict.notes)
            ),
            tolerance=checks.cauchy_threshold,
        )
    )
    if outcome.non_randomness is not None:
        distance = outcome.non_randomness.max_distance
        records.append(
            CheckRecord(
                name="non_randomness",
                passed=distance <= checks.non_randomness_tolerance,
                detail=f"{outcome.non_randomness.excluded_points} atom points excluded",
                value=distance,
                tolerance=checks.non_randomness_tolerance,
            )
        )
    return records


def run_checks(exp: Experiment, outcome: Optional[PipelineOutcome]) -> List[CheckRecord]:
    """All property suites; a check that raises is recorded as failed."""
    samples = exp.config.checks.verify_samples
    suites: List[Check] = [
        lambda: check_compatibility(exp, samples),
        lambda: check_word_norm(exp),
        lambda: check_toeplitz(),
        lambda: check_sturm(samples),
        lambda: check_folner_arithmetic(),
        lambda: check_heat_kernel(exp, samples),
        lambda: check_boundary_principle(exp, samples),
        lambda: check_co_decay(exp),
        lambda: check_ergodic_average(exp),
        lambda: check_chebyshev_trace(exp),
        lambda: check_equivariance(exp, max(samples // 4, 1)),
    ]
    records: List[CheckRecord] = []
    for suite in suites:
        try:
            records.append(suite())
        except IDSLabError as exc:
            logger.error(f"[VERIFY] check raised: {exc}")
            records.append(CheckRecord(name=type(exc).__name__, passed=False, detail=str(exc)))
    if outcome is not None:
        records.extend(check_outcome(exp, outcome))
    for record in records:
        status = "pass" if record.passed else "FAIL"
        logger.info(f"[VERIFY] {record.name}: {status} {record.detail}")
    return records
