"""Integration tests: config loading through the full ids pipeline."""

import os
from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import pytest

from idslab.cli.runner import (
    Experiment,
    admissible_stage,
    boundary_table_stage,
    cached_sweep_stage,
    folner_stage,
    load_config,
    pipeline_stage,
    sweep_stage,
)
from idslab.cli.verify import (
    check_chebyshev_trace,
    check_co_decay,
    check_compatibility,
    check_equivariance,
    check_ergodic_average,
    check_heat_kernel,
    check_outcome,
    check_word_norm,
    run_checks,
)
from idslab.config import get_settings
from idslab.errors import ConfigurationError, IDSLabError
from idslab.folner import EquivalenceVerdict
from idslab.models import ExperimentConfig

pytestmark = pytest.mark.integration

WriteConfig = Callable[..., Path]


@pytest.fixture
def experiment(
    small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
) -> Experiment:
    config = load_config(write_config(small_config))
    return Experiment.from_config(config, str(tmp_path / "out"), workers=1)


class TestLoadConfig:
    def test_schema_violation_names_field(
        self, small_config: Dict[str, Any], write_config: WriteConfig
    ) -> None:
        path = write_config(dict(small_config, tGrid=[-1.0]))

        with pytest.raises(ConfigurationError) as exc_info:
            load_config(path)

        assert exc_info.value.field_path == "tGrid"
        assert "tGrid" in str(exc_info.value)

    def test_invalid_json(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="invalid JSON"):
            load_config(path)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "absent.json")

    def test_shipped_configs_validate(self) -> None:
        root = Path(__file__).resolve().parents[2] / "configs"
        for path in sorted(root.glob("*.json")):
            assert load_config(path).name


class TestExperiment:
    def test_domain_objects(self, experiment: Experiment) -> None:
        assert experiment.c0 == 1.0
        assert experiment.free_dimension == 1
        assert experiment.potential is not None
        assert experiment.environment(1) is not None

    def test_free_dimension_needs_cayley_lattice(
        self, small_config: Dict[str, Any], tmp_path: Path
    ) -> None:
        heisenberg = ExperimentConfig.model_validate(
            dict(small_config, group={"family": "heisenberg3", "rank": 3}, potential={})
        )
        ladder = ExperimentConfig.model_validate(
            dict(
                small_config,
                graph={
                    "fiberSize": 2,
                    "intraEdges": [[0, 1]],
                    "interEdges": [
                        {"generator": [1], "source": 0, "target": 0},
                        {"generator": [1], "source": 1, "target": 1},
                    ],
                },
            )
        )

        assert Experiment.from_config(heisenberg, str(tmp_path)).free_dimension is None
        assert Experiment.from_config(ladder, str(tmp_path)).free_dimension is None

    def test_dense_limit_stays_in_the_experiment(
        self, small_config: Dict[str, Any], tmp_path: Path
    ) -> None:
        config = ExperimentConfig.model_validate(
            dict(small_config, solver={"maxDenseDimension": 64})
        )

        Experiment.from_config(config, str(tmp_path))

        assert "IDSLAB_MAX_DENSE_DIMENSION" not in os.environ
        assert get_settings().max_dense_dimension == 4096

    def test_stage_timings(self, experiment: Experiment) -> None:
        folner_stage(experiment)
        admissible_stage(experiment)
        assert set(experiment.timings) == {"folner", "admissible"}
        assert all(v >= 0 for v in experiment.timings.values())


class TestPipeline:
    def test_folner_report(self, experiment: Experiment) -> None:
        report = folner_stage(experiment)

        assert report.verdict is EquivalenceVerdict.CO_DECAY
        assert [row.index_size for row in report.rows] == [13, 25, 49, 97]

    def test_full_pipeline_passes_checks(self, experiment: Experiment) -> None:
        adm = admissible_stage(experiment)
        sweep = sweep_stage(experiment, adm)

        outcome = pipeline_stage(experiment, adm, sweep)
        records = check_outcome(experiment, outcome)

        failed = [r.name for r in records if not r.passed]
        assert failed == []
        assert outcome.non_randomness is not None
        assert outcome.laplace.reference is not None
        assert outcome.laplace.kernel_gaps is not None
        assert outcome.laplace.kernel_gaps.shape == (4, 2)
        assert outcome.idse.seeds == (1, 2, 3, 4)

    def test_cached_sweep_round_trip(self, experiment: Experiment) -> None:
        adm = admissible_stage(experiment)
        with pytest.raises(IDSLabError, match="run ids first"):
            cached_sweep_stage(experiment, adm)

        solved = sweep_stage(experiment, adm)
        cached = cached_sweep_stage(experiment, adm)

        for key, spectrum in solved.spectra.items():
            assert np.array_equal(cached.spectra[key].eigenvalues, spectrum.eigenvalues)

    def test_boundary_table_reaches_epsilon(self, experiment: Experiment) -> None:
        table = boundary_table_stage(experiment)

        for t in experiment.config.t_grid:
            assert table.required_pad(t) is not None
            assert table.required_pad(t) <= experiment.config.heat.table_depth

    def test_property_suites(self, experiment: Experiment) -> None:
        records = run_checks(experiment, None)

        names = [r.name for r in records]
        assert names == [
            "compatibility",
            "word_norm_growth",
            "eigensolver_toeplitz",
            "sturm_count",
            "folner_arithmetic",
            "heat_kernel_invariants",
            "boundary_principle",
            "co_decay",
            "ergodic_average",
            "chebyshev_oracle",
            "equivariance",
        ]
        assert all(r.passed for r in records), [r for r in records if not r.passed]

    def test_property_suites_on_heisenberg(
        self, small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
    ) -> None:
        payload = dict(
            small_config,
            group={"family": "heisenberg3", "rank": 3},
            folner={"radii": [4, 8, 16], "dMax": 0, "decayThreshold": 0.9},
            potential={
                "terms": [{"offset": [0, 0, 0], "value": 1.0}],
                "law": {"kind": "uniform", "a": 0.0, "b": 1.0},
            },
        )
        exp = Experiment.from_config(
            load_config(write_config(payload)), str(tmp_path / "out"), workers=1
        )

        records = [
            check_compatibility(exp, 20),
            check_word_norm(exp),
            check_heat_kernel(exp, 10),
            check_co_decay(exp),
            check_ergodic_average(exp),
            check_chebyshev_trace(exp),
            check_equivariance(exp, 5),
        ]

        assert all(r.passed for r in records), [r for r in records if not r.passed]
        assert "3.3" in records[1].detail
