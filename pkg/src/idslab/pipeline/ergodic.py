"""Site averages of bounded functions of (ω, x) and their ensemble references."""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..environment import (
    CouplingLaw,
    EnvironmentSample,
    SingleSitePotential,
    potential_values,
    uniform_bound,
)
from ..group import PeriodicGraph, VertexSet, ball, phi
from .heat_lemma import padded_heat_diagonal

logger = logging.getLogger(__name__)


class SiteFunction(ABC):
    """Jointly measurable f(ω, x) with a known bound |f| ≤ bound."""

    @property
    @abstractmethod
    def bound(self) -> float:
        pass

    @abstractmethod
    def values(self, omega: Optional[EnvironmentSample], domain: VertexSet) -> np.ndarray:
        """f(ω, x) for every x of the domain, in key order."""
        pass


class ConstantSiteFunction(SiteFunction):
    def __init__(self, value: float = 1.0):
        self.value = float(value)

    @property
    def bound(self) -> float:
        return abs(self.value)

    def values(self, omega: Optional[EnvironmentSample], domain: VertexSet) -> np.ndarray:
        return np.full(domain.size, self.value)


class PotentialSiteFunction(SiteFunction):
    """f(ω, x) = V^ω(x)."""

    def __init__(self, potential: SingleSitePotential, law: CouplingLaw):
        self.potential = potential
        self.law = law

    @property
    def bound(self) -> float:
        return uniform_bound(self.law, self.potential)

    def values(self, omega: Optional[EnvironmentSample], domain: VertexSet) -> np.ndarray:
        if omega is None:
            return np.zeros(domain.size)
        return potential_values(omega, self.potential, domain, domain.graph)


class HeatDiagonalSiteFunction(SiteFunction):
    """f(ω, x) = k^ω(t, x, x), the ambient diagonal approximated on a padded domain."""

    def __init__(
        self,
        t: float,
        pad: int,
        potential: Optional[SingleSitePotential] = None,
        law: Optional[CouplingLaw] = None,
        tolerance: float = 1e-13,
    ):
        if t <= 0:
            raise ValueError(f"t must be positive, got {t}")
        self.t = float(t)
        self.pad = int(pad)
        self.potential = potential
        self.law = law
        self.tolerance = tolerance

    @property
    def bound(self) -> float:
        # H ≥ −C_0, so 0 < k(t, x, x) ≤ e^{C_0 t}
        if self.potential is None or self.law is None:
            return 1.0
        return math.exp(uniform_bound(self.law, self.potential) * self.t)

    def values(self, omega: Optional[EnvironmentSample], domain: VertexSet) -> np.ndarray:
        return padded_heat_diagonal(
            domain, self.pad, self.t, omega, self.potential, tolerance=self.tolerance
        )


@dataclass(frozen=True, eq=False)
class ErgodicResult:
    """Per-n site averages against the reference (1/|F|)·E Σ_{x∈F} f(·, x)."""

    averages: np.ndarray
    average_stderrs: np.ndarray
    sizes: np.ndarray
    reference: float
    reference_stderr: float
    samples: int
    bound: float

    @property
    def deviations(self) -> np.ndarray:
        return np.abs(self.averages - self.reference)

    def within(self, sigmas: float = 3.0, index: int = -1) -> bool:
        """|average − reference| within ``sigmas`` combined standard errors."""
        spread = math.hypot(float(self.average_stderrs[index]), self.reference_stderr)
        return bool(self.deviations[index] <= sigmas * spread)


def _site_stderr(values: np.ndarray) -> float:
    if values.shape[0] < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(values.shape[0]))


def ergodic_average(
    f: SiteFunction,
    omega: Optional[EnvironmentSample],
    domains: Sequence[VertexSet],
    reference_seeds: Sequence[int] = (),
    law: Optional[CouplingLaw] = None,
) -> ErgodicResult:
    """(1/|A_n|) Σ_{x∈A_n} f(ω, x) per n, with a Monte Carlo reference.

    Args:
        f: Bounded site function
        omega: The fixed environment ω (None for a deterministic f)
        domains: Sets A_n
        reference_seeds: Seeds of the fresh samples for the reference
        law: Coupling law of the fresh samples, ``omega.law`` by default

    Returns:
        Averages, their site-level standard errors and the reference
    """
    if not domains:
        raise ValueError("no domains given")
    averages, stderrs = [], []
    for domain in domains:
        values = f.values(omega, domain)
        averages.append(math.fsum(values) / values.shape[0])
        stderrs.append(_site_stderr(values))

    law = law or (omega.law if omega is not None else None)
    reference, reference_stderr, samples = ensemble_reference(
        f, domains[0].graph, law, reference_seeds, omega
    )
    logger.info(
        f"[PIPELINE] ergodic averages {averages[-1]:.6g} vs reference "
        f"{reference:.6g} ± {reference_stderr:.2g} over {samples} samples"
    )
    return ErgodicResult(
        averages=np.asarray(averages),
        average_stderrs=np.asarray(stderrs),
        sizes=np.asarray([d.size for d in domains]),
        reference=reference,
        reference_stderr=reference_stderr,
        samples=samples,
        bound=f.bound,
    )


def ensemble_reference(
    f: SiteFunction,
    graph: PeriodicGraph,
    law: Optional[CouplingLaw],
    seeds: Sequence[int],
    omega: Optional[EnvironmentSample] = None,
) -> Tuple[float, float, int]:
    """(1/|F|)·E Σ_{x∈F} f(·, x) over fresh samples, with its standard error.

    Without a law or seeds the single environment ``omega`` is used.
    """
    cell = phi(ball(graph.group, 0), graph)
    if law is None or not seeds:
        per_sample = [math.fsum(f.values(omega, cell)) / cell.size]
    else:
        per_sample = [
            math.fsum(f.values(EnvironmentSample.fresh(s, law, graph.group), cell)) / cell.size
            for s in seeds
        ]
    samples = np.asarray(per_sample)
    return math.fsum(samples) / samples.shape[0], _site_stderr(samples), int(samples.shape[0])
