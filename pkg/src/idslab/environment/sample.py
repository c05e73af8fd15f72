"""Realizations ω of i.i.d. couplings, the shift action and alloy potentials.

Couplings are generated counter-style: ω_γ is a pure function of the seed and
the coordinates of base_shift·γ, hashed with splitmix64. The shift T_γ only
relabels sites, so V^{T_γ ω}(x) = V^ω(γ⁻¹x) holds bit for bit. The hash is a
mixing function, not a cryptographic one.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import GroupMismatchError, UnboundedLawError
from ..group import (
    GroupElement,
    GroupSpec,
    PeriodicGraph,
    Vertex,
    VertexSet,
    get_group_law,
    inverse,
)
from .laws import CouplingLaw, SingleSitePotential

logger = logging.getLogger(__name__)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_UNIT = 2.0 ** -53


def splitmix64(x: np.ndarray) -> np.ndarray:
    """Vectorised splitmix64 finaliser on uint64 arrays (wrapping arithmetic)."""
    with np.errstate(over="ignore"):
        z = np.asarray(x, dtype=np.uint64) + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def hash_sites(seed: int, coords: np.ndarray) -> np.ndarray:
    """One 64-bit hash per coordinate row, chained through splitmix64."""
    coords = np.atleast_2d(np.asarray(coords, dtype=np.int64))
    state = splitmix64(np.full(coords.shape[0], seed, dtype=np.uint64))
    for column in coords.T:
        state = splitmix64(state ^ column.astype(np.uint64))
    return state


def uniform_from_hash(hashed: np.ndarray) -> np.ndarray:
    """Top 53 bits as a double in [0, 1)."""
    return (np.asarray(hashed, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * _UNIT


@dataclass(frozen=True)
class EnvironmentSample:
    """One realization ω."""

    seed: int
    law: CouplingLaw
    base_shift: GroupElement

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def fresh(cls, seed: int, law: CouplingLaw, spec: GroupSpec) -> "EnvironmentSample":
        """A sample with identity base shift."""
        return cls(seed, law, spec.identity)

    def site_coords(self, coords: np.ndarray) -> np.ndarray:
        """Coordinates of base_shift·γ for each row γ."""
        law = get_group_law(self.base_shift.family)
        base = np.asarray(self.base_shift.coords, dtype=np.int64)
        return law.multiply(base, np.atleast_2d(np.asarray(coords, dtype=np.int64)))


def coupling(omega: EnvironmentSample, gamma: GroupElement) -> float:
    """ω_γ."""
    if gamma.family != omega.base_shift.family or gamma.rank != omega.base_shift.rank:
        raise GroupMismatchError(f"{gamma} does not belong to the sample's group")
    return float(couplings(omega, np.asarray([gamma.coords]))[0])


def couplings(omega: EnvironmentSample, coords: np.ndarray) -> np.ndarray:
    """ω_γ for each coordinate row γ."""
    u = uniform_from_hash(hash_sites(omega.seed, omega.site_coords(coords)))
    return omega.law.inverse_cdf(u)


def shift(omega: EnvironmentSample, gamma: GroupElement) -> EnvironmentSample:
    """T_γ ω, with (T_γ ω)_η = ω_{γ⁻¹η}.

    The base shift becomes base·γ⁻¹, so shift(shift(ω, γ₂), γ₁) equals
    shift(ω, γ₁γ₂).
    """
    base = omega.base_shift
    if gamma.family != base.family or gamma.rank != base.rank:
        raise GroupMismatchError(f"{gamma} does not belong to the sample's group")
    return EnvironmentSample(omega.seed, omega.law, base * inverse(gamma))


def potential_values(
    omega: EnvironmentSample,
    potential: SingleSitePotential,
    domain: Union[VertexSet, np.ndarray],
    graph: PeriodicGraph,
) -> np.ndarray:
    """V^ω on every vertex key of the domain, in key order.

    V^ω((g, f)) = Σ ω_{g·o⁻¹}·u(o, f) over the terms (o, f) of u; terms are
    added in their listed order.
    """
    keys = domain.keys if isinstance(domain, VertexSet) else np.asarray(domain, dtype=np.int64)
    element_keys, fibers = PeriodicGraph.split_keys(keys)
    coords = graph.group.decode(element_keys)
    law = graph.group.law
    values = np.zeros(keys.shape[0], dtype=float)
    for term in potential.terms:
        if len(term.offset) != graph.group.rank:
            raise GroupMismatchError(f"single-site offset {term.offset} has the wrong rank")
        mask = fibers == term.fiber
        if not mask.any():
            continue
        offset_inv = law.inverse(np.asarray(term.offset, dtype=np.int64))
        sites = law.multiply(coords[mask], offset_inv)
        values[mask] += couplings(omega, sites) * term.value
    return values


def potential_value(
    omega: EnvironmentSample, potential: SingleSitePotential, vertex: Vertex, graph: PeriodicGraph
) -> float:
    """V^ω(x) for a single vertex."""
    keys = graph.vertex_keys([vertex])
    return float(potential_values(omega, potential, keys, graph)[0])


def uniform_bound(law: CouplingLaw, potential: SingleSitePotential) -> float:
    """C_0 = max|ω_γ| · Σ|u| ≥ ‖V^ω‖_∞ for every ω."""
    max_abs = law.max_abs
    if not np.isfinite(max_abs):
        raise UnboundedLawError(f"{law.kind} law has unbounded support")
    return float(max_abs * potential.total_mass)
