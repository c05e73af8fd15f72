"""Tests for CSV/JSON writers and the manifest."""

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from idslab.cli.reports import (
    file_digest,
    format_value,
    write_csv,
    write_ids_csv,
    write_laplace_csv,
    write_manifest,
    write_report,
)
from idslab.models import RunReport, StageStatus
from idslab.pipeline import IDSEstimate, LaplaceReport


def read_rows(path: Path) -> list:
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


@pytest.mark.parametrize(
    "value, expected",
    [
        (True, "1"),
        (np.bool_(False), "0"),
        (np.int64(7), "7"),
        (0.1, "0.10000000000000001"),
        (np.float64(2.0), "2"),
        (None, ""),
        ("CO_DECAY", "CO_DECAY"),
    ],
)
def test_format_value(value: object, expected: str) -> None:
    assert format_value(value) == expected


def test_write_csv_creates_parents(tmp_path: Path) -> None:
    path = write_csv(tmp_path / "a" / "b.csv", ["x", "y"], [(1, 0.5)])
    assert path.read_text(encoding="utf-8") == "x,y\n1,0.5\n"


def test_ids_csv_layout(tmp_path: Path) -> None:
    idse = IDSEstimate(
        lambda_grid=np.array([0.0, 1.0]),
        per_index=np.array([[[0.0, 0.25]], [[0.0, 0.5]]]),
        indices=(0, 1),
        seeds=(4,),
        volumes=(4, 8),
        spectral_minima=np.zeros((2, 1)),
        spectral_maxima=np.ones((2, 1)),
        atom_mask=np.array([False, True]),
    )

    rows = read_rows(write_ids_csv(tmp_path / "ids.csv", idse))

    assert rows[0] == ["lambda", "n0_s4", "n1_s4", "limit", "limit_gap", "atom"]
    assert rows[2] == ["1", "0.25", "0.5", "0.5", "0.25", "1"]


def test_laplace_csv_without_references(tmp_path: Path) -> None:
    report = LaplaceReport(
        t_grid=np.array([1.0]),
        values=np.array([[[0.5]]]),
        indices=(0,),
        seeds=(2,),
        volumes=(3,),
    )

    rows = read_rows(write_laplace_csv(tmp_path / "laplace.csv", report))

    assert rows[0] == ["t", "n0_s2", "reference", "kernel_gap_n0"]
    assert rows[1] == ["1", "0.5", "", ""]


def test_report_and_manifest(tmp_path: Path) -> None:
    report = RunReport(
        command="ids", config_hash="h", status=StageStatus.FAILED, seeds=[[1]], config={}
    )
    report_path = write_report(tmp_path, report)
    data = write_csv(tmp_path / "data.csv", ["x"], [(1,)])

    manifest_path = write_manifest(tmp_path, "h", [report_path, data], {"solve": 1.5})
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    assert json.loads(report_path.read_text(encoding="utf-8"))["status"] == "failed"
    assert manifest["configHash"] == "h"
    assert manifest["timings"] == {"solve": 1.5}
    assert [f["path"] for f in manifest["files"]] == ["data.csv", "report.json"]
    assert manifest["files"][0]["sha256"] == file_digest(data)
    assert manifest["files"][0]["sizeBytes"] == data.stat().st_size
