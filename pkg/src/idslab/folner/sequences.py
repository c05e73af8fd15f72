"""Følner sequences, Følner defects and temperedness."""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidSequenceError
from ..group import ElementSet, GroupElement, GroupSpec, PeriodicGraph, Vertex, VertexSet
from ..group import ball, ball_sizes, metric_ball

logger = logging.getLogger(__name__)


class ProvenanceKind(str, Enum):
    """How the index sets of a sequence were produced."""

    COMBINATORIAL_BALLS = "combinatorial_balls"
    METRIC_BALLS = "metric_balls"
    USER_SUPPLIED = "user_supplied"


@dataclass(frozen=True)
class Provenance:
    kind: ProvenanceKind
    radii: Tuple[int, ...] = ()
    center: Optional[Vertex] = None


@dataclass(frozen=True)
class FolnerSequence:
    """Monotone increasing finite index sets I_1 ⊂ I_2 ⊂ ... in Γ."""

    spec: GroupSpec
    index_sets: Tuple[ElementSet, ...]
    provenance: Provenance = field(default=Provenance(ProvenanceKind.USER_SUPPLIED))
    truncated: bool = False

    def __post_init__(self) -> None:
        sets = tuple(self.index_sets)
        object.__setattr__(self, "index_sets", sets)
        if not sets:
            raise InvalidSequenceError("a Følner sequence needs at least one index set")
        for n, current in enumerate(sets):
            if current.spec != self.spec:
                raise InvalidSequenceError(f"index set {n} belongs to another group")
            if len(current) == 0:
                raise InvalidSequenceError(f"index set {n} is empty")
            if n and not sets[n - 1].issubset(current):
                raise InvalidSequenceError(f"index set {n} does not contain index set {n - 1}")
        if self.provenance.kind is not ProvenanceKind.USER_SUPPLIED:
            radii = self.provenance.radii
            if len(radii) != len(sets):
                raise InvalidSequenceError("one radius per index set is required")
            if any(b <= a for a, b in zip(radii, radii[1:])):
                raise InvalidSequenceError(f"radii must be strictly increasing, got {list(radii)}")

    @classmethod
    def combinatorial_balls(cls, spec: GroupSpec, radii: Sequence[int]) -> "FolnerSequence":
        """I_n = E^{r_n}."""
        radii = tuple(int(r) for r in radii)
        return cls(
            spec,
            tuple(ball(spec, r) for r in radii),
            Provenance(ProvenanceKind.COMBINATORIAL_BALLS, radii),
        )

    @classmethod
    def user_supplied(cls, spec: GroupSpec, index_sets: Sequence[ElementSet]) -> "FolnerSequence":
        return cls(spec, tuple(index_sets))

    def __len__(self) -> int:
        return len(self.index_sets)

    def __getitem__(self, n: int) -> ElementSet:
        return self.index_sets[n]

    def __iter__(self) -> Iterator[ElementSet]:
        return iter(self.index_sets)

    def temperedness_quotient(self, i: int, j: int) -> Fraction:
        """|I_j · I_i⁻¹| / |I_j| for i < j.

        For combinatorial balls E^{r'}·E^{-r} = E^{r+r'} since E is symmetric.
        """
        if self.provenance.kind is ProvenanceKind.COMBINATORIAL_BALLS:
            r, r_next = self.provenance.radii[i], self.provenance.radii[j]
            sizes = ball_sizes(self.spec, r + r_next)
            return Fraction(sizes[r + r_next], sizes[r_next])
        return temperedness_quotient(self.index_sets[i], self.index_sets[j])

    def temperedness_quotients(self) -> List[Fraction]:
        """Consecutive quotients along the sequence."""
        return [self.temperedness_quotient(n, n + 1) for n in range(len(self) - 1)]

    def subsequence(self, indices: Sequence[int], truncated: bool = False) -> "FolnerSequence":
        indices = list(indices)
        radii = tuple(self.provenance.radii[n] for n in indices) if self.provenance.radii else ()
        return FolnerSequence(
            self.spec,
            tuple(self.index_sets[n] for n in indices),
            replace(self.provenance, radii=radii),
            truncated,
        )


def folner_defect(index_set: ElementSet, gamma: GroupElement) -> Fraction:
    """|I Δ Iγ| / |I|, exactly."""
    if len(index_set) == 0:
        raise ValueError("Følner defect of an empty set is undefined")
    moved = index_set.right_translate(gamma)
    return Fraction(len(index_set ^ moved), len(index_set))


def temperedness_quotient(index_set: ElementSet, next_set: ElementSet) -> Fraction:
    """|I_next · I_n⁻¹| / |I_next| by explicit product-set enumeration."""
    if len(index_set) == 0 or len(next_set) == 0:
        raise ValueError("temperedness quotient needs non-empty sets")
    product = next_set.product(index_set.inverse())
    return Fraction(len(product), len(next_set))


def _as_fraction(value: float) -> Fraction:
    return Fraction(str(value))


def ball_growth_quotient(spec: GroupSpec, r: int, d: int) -> Fraction:
    """(|E^{r+d}| − |E^{r−d}|) / |E^r| for 0 ≤ d ≤ r."""
    sizes = ball_sizes(spec, r + d)
    return Fraction(sizes[r + d] - sizes[r - d], sizes[r])


def select_radii(spec: GroupSpec, max_radius: int, d_max: int, epsilon: float) -> List[int]:
    """Radii r in [d_max, max_radius] whose ball growth quotient is ≤ epsilon for all d ≤ d_max.

    Args:
        spec: Group and generating set
        max_radius: Largest radius considered
        d_max: Largest collar thickness
        epsilon: Quotient threshold (compared exactly)

    Returns:
        Increasing list of qualifying radii, possibly empty
    """
    if d_max < 1 or max_radius < d_max:
        raise ValueError(f"need max_radius >= d_max >= 1, got {max_radius}, {d_max}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    bound = _as_fraction(epsilon)
    sizes = ball_sizes(spec, max_radius + d_max)
    radii = []
    for r in range(d_max, max_radius + 1):
        quotients = (Fraction(sizes[r + d] - sizes[r - d], sizes[r]) for d in range(1, d_max + 1))
        if all(q <= bound for q in quotients):
            radii.append(r)
    logger.info(f"[FOLNER] {len(radii)} radii in [{d_max}, {max_radius}] pass epsilon={epsilon}")
    return radii


def tempered_indices(seq: FolnerSequence, c: float) -> Tuple[List[int], bool]:
    """Greedy choice of indices whose consecutive temperedness quotients are ≤ c.

    Keeps the first set, then appends the earliest later set meeting the
    bound against the last kept one. The flag is set when the remaining sets
    all fail.
    """
    if c < 1:
        raise ValueError(f"temperedness constant must be >= 1, got {c}")
    bound = _as_fraction(c)
    kept = [0]
    truncated = False
    while True:
        last = kept[-1]
        following = next(
            (j for j in range(last + 1, len(seq)) if seq.temperedness_quotient(last, j) <= bound),
            None,
        )
        if following is None:
            truncated = last < len(seq) - 1
            break
        kept.append(following)
    if truncated:
        logger.warning(
            f"[FOLNER] tempered extraction with C={c} stopped after {len(kept)} of {len(seq)} sets"
        )
    return kept, truncated


def extract_tempered_subsequence(seq: FolnerSequence, c: float) -> FolnerSequence:
    """Greedy tempered subsequence, flagged as truncated when it stops early."""
    kept, truncated = tempered_indices(seq, c)
    return seq.subsequence(kept, truncated)


def cells_inside(domain: VertexSet) -> ElementSet:
    """I = {γ : γF ⊆ D}."""
    graph = domain.graph
    element_keys, _ = PeriodicGraph.split_keys(domain.keys)
    unique, counts = np.unique(element_keys, return_counts=True)
    return ElementSet.from_keys(graph.group, unique[counts == graph.fiber_size])


def metric_ball_sequence(
    graph: PeriodicGraph, center: Vertex, radii: Sequence[int]
) -> FolnerSequence:
    """I_n = cellsInside(B_{r_n}(p)); radii with an empty cell set are skipped."""
    kept_radii: List[int] = []
    sets: List[ElementSet] = []
    for r in radii:
        cells = cells_inside(metric_ball(graph, center, r))
        if len(cells) == 0:
            logger.debug(f"[FOLNER] metric ball of radius {r} contains no full cell")
            continue
        kept_radii.append(int(r))
        sets.append(cells)
    return FolnerSequence(
        graph.group,
        tuple(sets),
        Provenance(ProvenanceKind.METRIC_BALLS, tuple(kept_radii), center),
    )
