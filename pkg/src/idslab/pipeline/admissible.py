"""Admissible sequences: tempered Følner index sets with h-approximating domains."""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import ExperimentTooSmallError, InvalidSequenceError
from ..folner import (
    FolnerSequence,
    cells_inside,
    extract_tempered_subsequence,
    h_approximate,
    h_boundary,
    tempered_indices,
    topological_boundary,
)
from ..group import PeriodicGraph, VertexSet, bfs_layers, phi

logger = logging.getLogger(__name__)

MIN_ADMISSIBLE_LENGTH = 3


class ApproximationSide(str, Enum):
    """Which set the collar ∂_h is taken around."""

    CORE = "core"  # D_n Δ A_n ⊆ ∂_h A_n
    DOMAIN = "domain"  # D_n Δ A_n ⊆ ∂_h D_n


@dataclass(frozen=True)
class AdmissibleSequence:
    """Domains D_n along a tempered Følner sequence, A_n = φ(I_n)."""

    folner: FolnerSequence
    graph: PeriodicGraph
    domains: Tuple[VertexSet, ...]
    h: int
    temperedness_bound: float
    side: ApproximationSide = ApproximationSide.CORE

    def __post_init__(self) -> None:
        if len(self.domains) != len(self.folner):
            raise InvalidSequenceError("one domain per index set is required")
        bound = Fraction(str(self.temperedness_bound))
        for n, q in enumerate(self.folner.temperedness_quotients()):
            if q > bound:
                raise InvalidSequenceError(
                    f"temperedness quotient {float(q):.4g} at n={n} "
                    f"exceeds {self.temperedness_bound}"
                )
        for n, (core, domain) in enumerate(zip(self.cores, self.domains)):
            if domain.size == 0:
                raise InvalidSequenceError(f"domain {n} is empty")
            reference = core if self.side is ApproximationSide.CORE else domain
            if not (domain ^ core).issubset(h_boundary(reference, self.h)):
                raise InvalidSequenceError(f"domain {n} is not an {self.h}-approximation")

    @property
    def cores(self) -> Tuple[VertexSet, ...]:
        """A_n = φ(I_n)."""
        return tuple(phi(index_set, self.graph) for index_set in self.folner)

    @property
    def volumes(self) -> Tuple[int, ...]:
        return tuple(d.size for d in self.domains)

    def __len__(self) -> int:
        return len(self.domains)


def build_admissible(
    folner: FolnerSequence,
    graph: PeriodicGraph,
    c: float,
    h: int,
    seed: int,
    toggle_probability: float = 0.5,
) -> AdmissibleSequence:
    """Extract a tempered subsequence and h-approximate each A_n = φ(I_n).

    Args:
        folner: Candidate Følner sequence
        graph: Periodic graph over the sequence's group
        c: Temperedness constant
        h: Approximation radius; h = 0 keeps D_n = A_n
        seed: Seed for the random toggles
        toggle_probability: Chance of toggling a collar vertex

    Returns:
        The admissible sequence

    Raises:
        ExperimentTooSmallError: fewer than three index sets survive extraction
    """
    tempered = extract_tempered_subsequence(folner, c)
    if len(tempered) < MIN_ADMISSIBLE_LENGTH:
        raise ExperimentTooSmallError(
            f"only {len(tempered)} index sets remain after tempered extraction with C={c}"
        )
    rng = np.random.default_rng(seed)
    domains = []
    for index_set in tempered:
        core = phi(index_set, graph)
        domains.append(core if h == 0 else h_approximate(core, h, rng, toggle_probability))
    logger.info(
        f"[PIPELINE] admissible sequence with {len(domains)} domains, "
        f"volumes {[d.size for d in domains]}"
    )
    return AdmissibleSequence(tempered, graph, tuple(domains), h, c)


def approximation_radius(target: VertexSet, approximation: VertexSet) -> int:
    """Smallest h with target Δ approximation ⊆ ∂_h target."""
    difference = target ^ approximation
    if difference.size == 0:
        return 0
    boundary = topological_boundary(target).boundary
    remaining = difference.keys
    for depth, layer in enumerate(bfs_layers(boundary, 2 * target.size + 1)):
        remaining = np.setdiff1d(remaining, layer, assume_unique=True)
        if remaining.size == 0:
            return depth
    raise InvalidSequenceError("approximation differs from the target far from its boundary")


def admissible_from_domains(domains: Sequence[VertexSet], c: float) -> AdmissibleSequence:
    """Converse construction: I_n = {γ : γF ⊆ D_n}, A_n = φ(I_n) approximates D_n.

    Domains with no full cell are dropped; the approximation radius is measured.
    """
    if not domains:
        raise InvalidSequenceError("no domains given")
    graph = domains[0].graph
    kept: List[VertexSet] = []
    index_sets = []
    for domain in domains:
        cells = cells_inside(domain)
        if len(cells) == 0:
            continue
        kept.append(domain)
        index_sets.append(cells)
    if not kept:
        raise InvalidSequenceError("no domain contains a full cell")

    folner = FolnerSequence.user_supplied(graph.group, index_sets)
    positions, truncated = tempered_indices(folner, c)
    tempered = folner.subsequence(positions, truncated)
    chosen = tuple(kept[i] for i in positions)
    h = max(approximation_radius(d, phi(s, graph)) for d, s in zip(chosen, tempered))
    logger.info(f"[PIPELINE] derived {len(chosen)} domains with approximation radius {h}")
    return AdmissibleSequence(tempered, graph, chosen, h, c, ApproximationSide.DOMAIN)
