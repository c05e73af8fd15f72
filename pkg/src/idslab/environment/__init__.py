"""Random environments: coupling laws, samples and alloy-type potentials."""

from .laws import (
    BernoulliLaw,
    CouplingLaw,
    DiscreteLaw,
    SingleSitePotential,
    SiteTerm,
    UniformLaw,
    coupling_law_adapter,
)
from .sample import (
    EnvironmentSample,
    coupling,
    couplings,
    hash_sites,
    potential_value,
    potential_values,
    shift,
    splitmix64,
    uniform_bound,
    uniform_from_hash,
)

__all__ = [
    "BernoulliLaw",
    "CouplingLaw",
    "DiscreteLaw",
    "SingleSitePotential",
    "SiteTerm",
    "UniformLaw",
    "coupling_law_adapter",
    "EnvironmentSample",
    "coupling",
    "couplings",
    "hash_sites",
    "potential_value",
    "potential_values",
    "shift",
    "splitmix64",
    "uniform_bound",
    "uniform_from_hash",
]
