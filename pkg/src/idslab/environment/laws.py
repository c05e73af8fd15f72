"""Coupling laws μ and single-site potentials u."""

import math
from typing import Annotated, List, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator


class UniformLaw(BaseModel):
    """Uniform distribution on [a, b]."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["uniform"] = "uniform"
    a: float = 0.0
    b: float = 1.0

    @model_validator(mode="after")
    def _check_interval(self) -> "UniformLaw":
        if self.a > self.b:
            raise ValueError(f"uniform law needs a <= b, got a={self.a}, b={self.b}")
        return self

    @property
    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def variance(self) -> float:
        return (self.b - self.a) ** 2 / 12.0

    @property
    def max_abs(self) -> float:
        return max(abs(self.a), abs(self.b))

    def inverse_cdf(self, u: np.ndarray) -> np.ndarray:
        return self.a + (self.b - self.a) * np.asarray(u, dtype=float)


class BernoulliLaw(BaseModel):
    """values[1] with probability p, values[0] otherwise."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["bernoulli"] = "bernoulli"
    p: float = Field(default=0.5, ge=0.0, le=1.0)
    values: Tuple[float, float] = (0.0, 1.0)

    @property
    def mean(self) -> float:
        return (1.0 - self.p) * self.values[0] + self.p * self.values[1]

    @property
    def variance(self) -> float:
        return self.p * (1.0 - self.p) * (self.values[1] - self.values[0]) ** 2

    @property
    def max_abs(self) -> float:
        return max(abs(self.values[0]), abs(self.values[1]))

    def inverse_cdf(self, u: np.ndarray) -> np.ndarray:
        return np.where(np.asarray(u) < self.p, self.values[1], self.values[0]).astype(float)


class DiscreteLaw(BaseModel):
    """Finitely many atoms (value, probability)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["discrete"] = "discrete"
    atoms: Tuple[Tuple[float, float], ...]

    @field_validator("atoms")
    @classmethod
    def _check_atoms(
        cls, atoms: Tuple[Tuple[float, float], ...]
    ) -> Tuple[Tuple[float, float], ...]:
        if not atoms:
            raise ValueError("discrete law needs at least one atom")
        if any(p < 0 for _, p in atoms):
            raise ValueError("atom probabilities must be non-negative")
        total = math.fsum(p for _, p in atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"atom probabilities sum to {total}, expected 1")
        return atoms

    @property
    def mean(self) -> float:
        return math.fsum(v * p for v, p in self.atoms)

    @property
    def variance(self) -> float:
        m = self.mean
        return math.fsum(p * (v - m) ** 2 for v, p in self.atoms)

    @property
    def max_abs(self) -> float:
        return max(abs(v) for v, p in self.atoms if p > 0)

    def inverse_cdf(self, u: np.ndarray) -> np.ndarray:
        values = np.array([v for v, _ in self.atoms], dtype=float)
        cumulative = np.cumsum([p for _, p in self.atoms])
        idx = np.searchsorted(cumulative, np.asarray(u, dtype=float), side="right")
        return values[np.minimum(idx, len(values) - 1)]


CouplingLaw = Annotated[Union[UniformLaw, BernoulliLaw, DiscreteLaw], Field(discriminator="kind")]

coupling_law_adapter: TypeAdapter = TypeAdapter(CouplingLaw)


class SiteTerm(BaseModel):
    """u(offset, fiber) = value."""

    model_config = ConfigDict(frozen=True)

    offset: Tuple[int, ...]
    fiber: int = Field(default=0, ge=0)
    value: float


class SingleSitePotential(BaseModel):
    """Finitely supported single-site profile u on X."""

    model_config = ConfigDict(frozen=True)

    terms: Tuple[SiteTerm, ...] = ()

    @field_validator("terms")
    @classmethod
    def _check_terms(cls, terms: Tuple[SiteTerm, ...]) -> Tuple[SiteTerm, ...]:
        if any(not math.isfinite(t.value) for t in terms):
            raise ValueError("single-site values must be finite")
        ranks = {len(t.offset) for t in terms}
        if len(ranks) > 1:
            raise ValueError("all offsets must have the same number of coordinates")
        return terms

    @classmethod
    def unit_mass(cls, rank: int, fiber: int = 0) -> "SingleSitePotential":
        """u = δ at (e, fiber)."""
        return cls(terms=(SiteTerm(offset=(0,) * rank, fiber=fiber, value=1.0),))

    @property
    def total_mass(self) -> float:
        """Σ |u(x)|."""
        return math.fsum(abs(t.value) for t in self.terms)

    def terms_for_fiber(self, fiber: int) -> List[SiteTerm]:
        return [t for t in self.terms if t.fiber == fiber]
