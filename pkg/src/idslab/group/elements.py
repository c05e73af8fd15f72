"""Finitely generated amenable groups and their Cayley balls.

Elements are integer coordinate tuples. Sets of elements are stored as sorted
arrays of fixed-width integer keys, which keeps set algebra in numpy and makes
iteration order deterministic (key order equals lexicographic coordinate order).
"""

import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..errors import BallRadiusError, CoordinateOverflowError, GroupMismatchError

logger = logging.getLogger(__name__)

# Element keys use the low KEY_BITS bits; vertex keys append FIBER_BITS more.
KEY_BITS = 58
FIBER_BITS = 4


class GroupFamily(str, Enum):
    """Built-in group families."""

    INTEGER_LATTICE = "integer_lattice"
    HEISENBERG = "heisenberg3"


class GroupLaw(ABC):
    """Multiplication law acting on coordinate arrays.

    Arrays carry coordinates on the last axis and broadcast over the others.
    """

    @abstractmethod
    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Return the elementwise product a·b."""

    @abstractmethod
    def inverse(self, a: np.ndarray) -> np.ndarray:
        """Return the elementwise inverse."""

    def validate_rank(self, rank: int) -> None:
        """Reject coordinate lengths the law cannot handle."""
        if rank < 1:
            raise GroupMismatchError(f"rank must be positive, got {rank}")


class AbelianLatticeLaw(GroupLaw):
    """ℤ^d with componentwise addition."""

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.add(a, b)

    def inverse(self, a: np.ndarray) -> np.ndarray:
        return np.negative(a)


class HeisenbergLaw(GroupLaw):
    """Discrete Heisenberg group: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = a + b
        out[..., 2] += a[..., 0] * b[..., 1]
        return out

    def inverse(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = -a
        out[..., 2] += a[..., 0] * a[..., 1]
        return out

    def validate_rank(self, rank: int) -> None:
        if rank != 3:
            raise GroupMismatchError(f"Heisenberg elements have 3 coordinates, got {rank}")


_LAWS: Dict[str, GroupLaw] = {
    GroupFamily.INTEGER_LATTICE.value: AbelianLatticeLaw(),
    GroupFamily.HEISENBERG.value: HeisenbergLaw(),
}


def register_group_law(family: str, law: GroupLaw) -> None:
    """Register a user-defined multiplication law under a family name."""
    _LAWS[str(family)] = law
    logger.info(f"[GROUP] registered law for family '{family}'")


def get_group_law(family: str) -> GroupLaw:
    """Look up the law for a family name."""
    try:
        return _LAWS[_family_name(family)]
    except KeyError:
        raise GroupMismatchError(f"unknown group family '{family}'") from None


def _family_name(family: str) -> str:
    return family.value if isinstance(family, GroupFamily) else str(family)


@dataclass(frozen=True, order=True)
class GroupElement:
    """A single group element."""

    coords: Tuple[int, ...]
    family: str = GroupFamily.INTEGER_LATTICE.value

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        object.__setattr__(self, "family", _family_name(self.family))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _check_compatible(g: GroupElement, h: GroupElement) -> None:
    if g.family != h.family or g.rank != h.rank:
        raise GroupMismatchError(
            f"cannot combine {g.family}{g.coords} with {h.family}{h.coords}"
        )


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product g·h under the family's law."""
    _check_compatible(g, h)
    law = get_group_law(g.family)
    product = law.multiply(
        np.asarray(g.coords, dtype=np.int64), np.asarray(h.coords, dtype=np.int64)
    )
    return GroupElement(tuple(int(c) for c in product), g.family)


def inverse(g: GroupElement) -> GroupElement:
    """Group inverse g⁻¹."""
    law = get_group_law(g.family)
    inv = law.inverse(np.asarray(g.coords, dtype=np.int64))
    return GroupElement(tuple(int(c) for c in inv), g.family)


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated group with a symmetric generating set E ∋ e."""

    family: str
    rank: int
    generators: Tuple[GroupElement, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", _family_name(self.family))
        law = get_group_law(self.family)
        law.validate_rank(self.rank)
        if self.rank > KEY_BITS // 8:
            raise GroupMismatchError(f"rank {self.rank} too large for the key encoding")

        gens = set()
        for g in self.generators:
            g = g if isinstance(g, GroupElement) else GroupElement(tuple(g), self.family)
            if g.family != self.family or g.rank != self.rank:
                raise GroupMismatchError(
                    f"generator {g} does not belong to {self.family}/{self.rank}"
                )
            gens.add(g)
        if self.identity not in gens:
            raise ValueError("generating set must contain the identity")
        for g in gens:
            if inverse(g) not in gens:
                raise ValueError(f"generating set is not symmetric: missing inverse of {g}")
        object.__setattr__(self, "generators", tuple(sorted(gens)))

    @classmethod
    def integer_lattice(cls, dimension: int) -> "GroupSpec":
        """ℤ^d with E = {0, ±e_1, ..., ±e_d}."""
        gens = [GroupElement((0,) * dimension)]
        for i in range(dimension):
            for sign in (1, -1):
                coords = [0] * dimension
                coords[i] = sign
                gens.append(GroupElement(tuple(coords)))
        return cls(GroupFamily.INTEGER_LATTICE.value, dimension, tuple(gens))

    @classmethod
    def heisenberg(cls) -> "GroupSpec":
        """H₃(ℤ) with E = {e, (±1,0,0), (0,±1,0)}."""
        family = GroupFamily.HEISENBERG.value
        coords = [(0, 0, 0), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]
        return cls(family, 3, tuple(GroupElement(c, family) for c in coords))

    @property
    def law(self) -> GroupLaw:
        return get_group_law(self.family)

    @property
    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.rank, self.family)

    def element(self, *coords: int) -> GroupElement:
        """Build an element of this group from coordinates."""
        if len(coords) != self.rank:
            raise GroupMismatchError(f"expected {self.rank} coordinates, got {len(coords)}")
        return GroupElement(tuple(coords), self.family)

    def check_element(self, g: GroupElement) -> None:
        if g.family != self.family or g.rank != self.rank:
            raise GroupMismatchError(
                f"{g.family}{g.coords} is not an element of {self.family}/{self.rank}"
            )

    # Fixed-width key encoding

    @property
    def coordinate_bits(self) -> int:
        return KEY_BITS // self.rank

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Pack an (N, rank) coordinate array into order-preserving int64 keys."""
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.rank)
        bits = self.coordinate_bits
        offset = np.int64(1) << np.int64(bits - 1)
        shifted = coords + offset
        if shifted.size and (shifted.min() < 0 or shifted.max() >= (np.int64(1) << np.int64(bits))):
            raise CoordinateOverflowError(
                f"coordinates exceed ±{int(offset)} for {self.family}/{self.rank}"
            )
        keys = np.zeros(coords.shape[0], dtype=np.int64)
        for i in range(self.rank):
            keys = (keys << np.int64(bits)) | shifted[:, i]
        return keys

    def decode(self, keys: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`encode`."""
        keys = np.asarray(keys, dtype=np.int64).reshape(-1)
        bits = self.coordinate_bits
        mask = (np.int64(1) << np.int64(bits)) - np.int64(1)
        offset = np.int64(1) << np.int64(bits - 1)
        coords = np.empty((keys.shape[0], self.rank), dtype=np.int64)
        for i in range(self.rank):
            shift = np.int64(bits * (self.rank - 1 - i))
            coords[:, i] = ((keys >> shift) & mask) - offset
        return coords

    def generator_coords(self) -> np.ndarray:
        return np.array([g.coords for g in self.generators], dtype=np.int64)


def _frozen(keys: np.ndarray) -> np.ndarray:
    keys.setflags(write=False)
    return keys


@dataclass(frozen=True, eq=False)
class ElementSet:
    """Finite set of group elements held as sorted unique keys."""

    spec: GroupSpec
    keys: np.ndarray

    @classmethod
    def from_keys(cls, spec: GroupSpec, keys: np.ndarray) -> "ElementSet":
        return cls(spec, _frozen(np.unique(np.asarray(keys, dtype=np.int64))))

    @classmethod
    def from_coords(cls, spec: GroupSpec, coords: np.ndarray) -> "ElementSet":
        return cls.from_keys(spec, spec.encode(coords))

    @classmethod
    def from_elements(cls, spec: GroupSpec, elements: Iterable[GroupElement]) -> "ElementSet":
        elements = list(elements)
        for g in elements:
            spec.check_element(g)
        coords = np.array([g.coords for g in elements], dtype=np.int64).reshape(-1, spec.rank)
        return cls.from_coords(spec, coords)

    def __len__(self) -> int:
        return int(self.keys.shape[0])

    def __iter__(self) -> Iterator[GroupElement]:
        for row in self.coords():
            yield GroupElement(tuple(int(c) for c in row), self.spec.family)

    def __contains__(self, g: object) -> bool:
        if not isinstance(g, GroupElement):
            return False
        self.spec.check_element(g)
        key = self.spec.encode(np.asarray([g.coords]))[0]
        pos = np.searchsorted(self.keys, key)
        return bool(pos < len(self.keys) and self.keys[pos] == key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.keys, other.keys)

    def _check(self, other: "ElementSet") -> None:
        if self.spec != other.spec:
            raise GroupMismatchError("element sets belong to different groups")

    def coords(self) -> np.ndarray:
        return self.spec.decode(self.keys)

    def sorted_elements(self) -> Tuple[GroupElement, ...]:
        return tuple(self)

    def union(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.spec, _frozen(np.union1d(self.keys, other.keys)))

    def intersection(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        keys = np.intersect1d(self.keys, other.keys, assume_unique=True)
        return ElementSet(self.spec, _frozen(keys))

    def difference(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        keys = np.setdiff1d(self.keys, other.keys, assume_unique=True)
        return ElementSet(self.spec, _frozen(keys))

    def symmetric_difference(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        keys = np.setxor1d(self.keys, other.keys, assume_unique=True)
        return ElementSet(self.spec, _frozen(keys))

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference

    def issubset(self, other: "ElementSet") -> bool:
        self._check(other)
        return bool(np.isin(self.keys, other.keys, assume_unique=True).all())

    def right_translate(self, g: GroupElement) -> "ElementSet":
        """I·g."""
        self.spec.check_element(g)
        coords = self.spec.law.multiply(self.coords(), np.asarray(g.coords, dtype=np.int64))
        return ElementSet.from_coords(self.spec, coords)

    def left_translate(self, g: GroupElement) -> "ElementSet":
        """g·I."""
        self.spec.check_element(g)
        coords = self.spec.law.multiply(np.asarray(g.coords, dtype=np.int64), self.coords())
        return ElementSet.from_coords(self.spec, coords)

    def inverse(self) -> "ElementSet":
        """I⁻¹."""
        return ElementSet.from_coords(self.spec, self.spec.law.inverse(self.coords()))

    def product(self, other: "ElementSet", chunk_size: int = 2048) -> "ElementSet":
        """The product set I·J = {a·b : a ∈ I, b ∈ J}, built in chunks of I."""
        self._check(other)
        right = other.coords()
        left = self.coords()
        parts: List[np.ndarray] = []
        for start in range(0, left.shape[0], chunk_size):
            block = left[start : start + chunk_size]
            prod = self.spec.law.multiply(block[:, None, :], right[None, :, :])
            parts.append(np.unique(self.spec.encode(prod.reshape(-1, self.spec.rank))))
        if not parts:
            return ElementSet(self.spec, _frozen(np.empty(0, dtype=np.int64)))
        return ElementSet(self.spec, _frozen(np.unique(np.concatenate(parts))))


class _BallCache:
    """Spheres of the Cayley graph per group, grown on demand."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._spheres: Dict[GroupSpec, List[np.ndarray]] = {}

    def spheres(self, spec: GroupSpec, radius: int) -> List[np.ndarray]:
        with self._lock:
            layers = self._spheres.get(spec)
            if layers is None:
                layers = [spec.encode(np.asarray([spec.identity.coords]))]
                self._spheres[spec] = layers
            gens = spec.generator_coords()
            while len(layers) <= radius:
                current = layers[-1]
                previous = layers[-2] if len(layers) > 1 else np.empty(0, dtype=np.int64)
                coords = spec.decode(current)
                grown = spec.law.multiply(coords[:, None, :], gens[None, :, :])
                candidates = np.unique(spec.encode(grown.reshape(-1, spec.rank)))
                seen = np.union1d(current, previous)
                layers.append(np.setdiff1d(candidates, seen, assume_unique=True))
                if len(layers) % 16 == 0:
                    logger.debug(
                        f"[GROUP] {spec.family}: sphere {len(layers) - 1} "
                        f"has {len(layers[-1])} elements"
                    )
            return layers[: radius + 1]

    def clear(self) -> None:
        with self._lock:
            self._spheres.clear()


_ball_cache = _BallCache()


def _check_radius(r: int) -> None:
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    limit = get_settings().max_ball_radius
    if r > limit:
        raise BallRadiusError(f"radius {r} exceeds configured max_ball_radius {limit}")


def ball(spec: GroupSpec, r: int) -> ElementSet:
    """Combinatorial ball E^r: all products of at most r generators.

    Args:
        spec: Group with generating set E
        r: Non-negative radius

    Returns:
        The ball as a sorted element set
    """
    _check_radius(r)
    layers = _ball_cache.spheres(spec, r)
    return ElementSet(spec, _frozen(np.sort(np.concatenate(layers))))


def ball_sizes(spec: GroupSpec, r: int) -> List[int]:
    """|E^k| for k = 0..r."""
    _check_radius(r)
    sizes = np.cumsum([len(layer) for layer in _ball_cache.spheres(spec, r)])
    return [int(s) for s in sizes]


def word_norm(spec: GroupSpec, g: GroupElement) -> int:
    """Word norm ‖g‖ with respect to E, by BFS."""
    spec.check_element(g)
    key = spec.encode(np.asarray([g.coords]))[0]
    limit = get_settings().max_ball_radius
    radius = 0
    while radius <= limit:
        layers = _ball_cache.spheres(spec, radius)
        if np.isin(key, layers[radius]):
            return radius
        radius += 1
    raise BallRadiusError(f"{g} not reached within radius {limit}")


def growth_exponent(spec: GroupSpec, radii: Sequence[int]) -> float:
    """Least-squares slope of log|E^r| against log r."""
    radii = [int(r) for r in radii if r >= 1]
    if len(radii) < 2:
        raise ValueError("need at least two radii >= 1")
    sizes = ball_sizes(spec, max(radii))
    x = np.log(np.asarray(radii, dtype=float))
    y = np.log(np.asarray([sizes[r] for r in radii], dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def clear_ball_cache() -> None:
    """Drop memoised spheres (used by tests)."""
    _ball_cache.clear()
