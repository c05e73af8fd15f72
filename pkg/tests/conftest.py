"""Shared fixtures."""

import json
from pathlib import Path
from typing import Any, Callable, Dict, Iterator

import pytest

from idslab.config import reset_settings
from idslab.environment import SingleSitePotential, UniformLaw
from idslab.group import GroupSpec, PeriodicGraph, clear_ball_cache


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Every test starts from default settings and an empty ball cache."""
    for name in ("IDSLAB_WORKERS", "IDSLAB_MAX_DENSE_DIMENSION", "IDSLAB_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()
    clear_ball_cache()


@pytest.fixture
def z1() -> GroupSpec:
    return GroupSpec.integer_lattice(1)


@pytest.fixture
def z2() -> GroupSpec:
    return GroupSpec.integer_lattice(2)


@pytest.fixture
def heisenberg() -> GroupSpec:
    return GroupSpec.heisenberg()


@pytest.fixture
def z1_graph(z1: GroupSpec) -> PeriodicGraph:
    return PeriodicGraph.cayley(z1)


@pytest.fixture
def z2_graph(z2: GroupSpec) -> PeriodicGraph:
    return PeriodicGraph.cayley(z2)


@pytest.fixture
def uniform_law() -> UniformLaw:
    return UniformLaw(a=0.0, b=1.0)


@pytest.fixture
def unit_potential_z1() -> SingleSitePotential:
    return SingleSitePotential.unit_mass(1)


@pytest.fixture
def small_config() -> Dict[str, Any]:
    """A ℤ¹ Anderson experiment small enough for every test tier."""
    return {
        "name": "small",
        "group": {"family": "integer_lattice", "rank": 1},
        "folner": {
            "radii": [6, 12, 24, 48],
            "h": 1,
            "toggleSeed": 3,
            "dMax": 1,
            "decayThreshold": 0.2,
        },
        "potential": {
            "terms": [{"offset": [0], "value": 1.0}],
            "law": {"kind": "uniform", "a": 0.0, "b": 1.0},
        },
        "lambdaGrid": {"start": 0.0, "stop": 5.0, "num": 11},
        "tGrid": [0.5, 1.0],
        "seeds": [[1, 2], [3, 4]],
        "heat": {
            "ambientPad": 16,
            "tableDepth": 12,
            "tableEpsilon": 1e-4,
            "referenceSeeds": [100, 101, 102, 103],
        },
        "checks": {
            "cauchyThreshold": 0.2,
            "heatLemmaThreshold": 0.05,
            "nonRandomnessTolerance": 0.5,
            "verifySamples": 20,
        },
    }


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[Dict[str, Any]], Path]:
    """Write a config dict to a JSON file under tmp_path."""

    def _write(payload: Dict[str, Any], name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write
