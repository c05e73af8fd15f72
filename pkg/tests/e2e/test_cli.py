"""End-to-end tests of the ``idslab`` command group."""

import csv
import json
from pathlib import Path
from typing import Any, Callable, Dict, List

import numpy as np
import pytest
from click.testing import CliRunner

from idslab.cli import cli

pytestmark = pytest.mark.e2e

WriteConfig = Callable[..., Path]


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def run(runner: CliRunner, tmp_path: Path) -> Callable[..., Any]:
    def _run(config: Path, *args: str):
        argv = ["--config", str(config), "--workers", "1", "--output-dir", str(tmp_path / "out")]
        return runner.invoke(cli, argv + list(args))

    return _run


def read_csv(path: Path) -> List[List[str]]:
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def test_invalid_config_exits_2(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig
) -> None:
    result = run(write_config(dict(small_config, tGrid=[-0.5])), "ids")

    assert result.exit_code == 2
    assert "tGrid" in result.output


def test_unknown_subcommand(run: Callable[..., Any], write_config: WriteConfig) -> None:
    result = run(write_config({}), "nope")
    assert result.exit_code == 2


def test_folner(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
) -> None:
    result = run(write_config(small_config), "folner")

    assert result.exit_code == 0, result.output
    out = tmp_path / "out"
    rows = read_csv(out / "folner.csv")
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert rows[0][:2] == ["n", "index_size"]
    assert len(rows) == 5
    assert report["command"] == "folner"
    assert report["summary"]["verdict"] == "co-decay"
    assert (out / "manifest.json").exists()


def test_spectrum(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
) -> None:
    result = run(write_config(small_config), "spectrum", "--n", "0", "--seed", "2")

    assert result.exit_code == 0, result.output
    rows = read_csv(tmp_path / "out" / "spectrum_n0_s2.csv")
    values = [float(r[1]) for r in rows[1:]]
    assert rows[0] == ["index", "eigenvalue"]
    assert values == sorted(values)


def test_spectrum_index_out_of_range(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig
) -> None:
    result = run(write_config(small_config), "spectrum", "--n", "9")
    assert result.exit_code == 2


def test_heat(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
) -> None:
    result = run(write_config(small_config), "heat")

    assert result.exit_code == 0, result.output
    out = tmp_path / "out"
    table = read_csv(out / "htable.csv")
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert table[0] == ["t", "h", "gap"]
    assert set(report["summary"]["requiredPad"]) == {"0.5", "1"}
    assert report["status"] == "passed"


def test_ids_then_report_is_byte_identical(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
) -> None:
    config = write_config(small_config)
    out = tmp_path / "out"

    assert run(config, "ids").exit_code == 0
    first = (out / "report.json").read_bytes()
    ids_rows = read_csv(out / "ids.csv")
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))

    assert run(config, "report").exit_code == 0
    assert (out / "report.json").read_bytes() == first
    assert read_csv(out / "ids.csv") == ids_rows
    assert "timings" not in json.loads(first)
    assert {"solve", "laplace", "limits"} <= set(manifest["timings"])
    assert {f["path"] for f in manifest["files"]} == {"ids.csv", "laplace.csv", "report.json"}


def test_ids_csv_limit_column(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
) -> None:
    assert run(write_config(small_config), "ids").exit_code == 0

    rows = read_csv(tmp_path / "out" / "ids.csv")
    header, body = rows[0], rows[1:]
    limit = np.array([float(r[header.index("limit")]) for r in body])

    assert len(body) == 11
    assert np.all(np.diff(limit) >= 0)
    assert limit[-1] == 1.0


def test_report_without_cache_fails(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig
) -> None:
    result = run(write_config(small_config), "report")
    assert result.exit_code == 1


def test_verify_small_config(
    run: Callable[..., Any], small_config: Dict[str, Any], write_config: WriteConfig, tmp_path: Path
) -> None:
    result = run(write_config(small_config), "verify")

    assert result.exit_code == 0, result.output
    verify = json.loads((tmp_path / "out" / "verify.json").read_text(encoding="utf-8"))
    assert verify["passed"] is True
    assert {c["name"] for c in verify["checks"]} >= {"compatibility", "laplace_identity"}


@pytest.mark.slow
def test_verify_default_config(runner: CliRunner, tmp_path: Path) -> None:
    config = Path(__file__).resolve().parents[2] / "configs" / "default.json"

    result = runner.invoke(
        cli, ["--config", str(config), "--workers", "1", "--output-dir", str(tmp_path), "verify"]
    )

    assert result.exit_code == 0, result.output
